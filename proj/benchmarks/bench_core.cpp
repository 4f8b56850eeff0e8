#include <benchmark/benchmark.h>

#include "haus/hardy.hpp"
#include "haus/hausdorff.hpp"
#include "haus/verify.hpp"

namespace {

using namespace haus;

void BM_ForwardFourier(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampledSignal f = gaussian_derivative(Grid::centered(1.0 / 16.0, n));
  for (auto _ : state) benchmark::DoNotOptimize(forward_fourier(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForwardFourier)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_MultiplierClosedForm(benchmark::State& state) {
  const OperatorConfig cfg(WeightSpec::riemann_liouville(0.5), ScaleSpec::reciprocal(), 1.0);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiplier_eval(cfg, x));
    x = x > 8.0 ? 0.0 : x + 0.013;
  }
}
BENCHMARK(BM_MultiplierClosedForm);

void BM_MultiplierQuadrature(benchmark::State& state) {
  const MultiplierProfile m(WeightSpec::riemann_liouville(0.5), ScaleSpec::reciprocal());
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.by_quadrature(x));
    x = x > 8.0 ? 0.0 : x + 0.013;
  }
}
BENCHMARK(BM_MultiplierQuadrature);

void BM_Kernel(benchmark::State& state) {
  const KernelProfile k(OperatorConfig(WeightSpec::power_tail(1.5), ScaleSpec::reciprocal(), 1.0));
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.unscaled(s));
    s = s > 50.0 ? 0.1 : s * 1.07;
  }
}
BENCHMARK(BM_Kernel);

void BM_PartialSpectral(benchmark::State& state) {
  const OperatorConfig cfg(WeightSpec::power_tail(2.0), ScaleSpec::reciprocal(), 0.1);
  const SampledSignal f = gaussian_derivative(standard_grid());
  for (auto _ : state) benchmark::DoNotOptimize(partial_hausdorff_spectral(cfg, f));
}
BENCHMARK(BM_PartialSpectral)->Unit(benchmark::kMillisecond);

void BM_PartialConvolution(benchmark::State& state) {
  const OperatorConfig cfg(WeightSpec::power_tail(2.0), ScaleSpec::reciprocal(), 0.5);
  const SampledSignal f = make_bandlimited(4.0, Grid::centered(1.0 / 16.0, 4096));
  for (auto _ : state) benchmark::DoNotOptimize(partial_hausdorff_convolution(cfg, f));
}
BENCHMARK(BM_PartialConvolution)->Unit(benchmark::kMillisecond);

void BM_H1Estimate(benchmark::State& state) {
  const SampledSignal f = make_atom({0.0, 8.0, AtomShape::DifferenceOfBumps}, standard_grid());
  const MaximalConfig cfg = MaximalConfig::for_signal(f);
  for (auto _ : state) benchmark::DoNotOptimize(h1_norm_estimate(f, cfg));
}
BENCHMARK(BM_H1Estimate)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
