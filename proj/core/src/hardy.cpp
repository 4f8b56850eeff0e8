#include "haus/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "haus/error.hpp"
#include "haus/parallel.hpp"
#include "haus/quad.hpp"

namespace haus {

namespace {

constexpr double kTableDx = 1.0 / 256.0;
constexpr std::size_t kTableN = std::size_t{1} << 17;

double raw_bump(double x) noexcept {
  const double d = 1.0 - x * x;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

struct MollifierTable {
  double normalization = 0.0;
  double dxi = 0.0;
  std::vector<double> values;  // Phi^(k dxi), k = 0 .. N/2

  MollifierTable() {
    normalization = 1.0 / quad::integrate(quad::Integrand::on(raw_bump, -1.0, 1.0), 1e-12, 1e-15).value;
    const Grid grid = Grid::centered(kTableDx, kTableN);
    const SampledSignal phi = SampledSignal::from_function(grid, [&](double x) { return normalization * raw_bump(x); });
    const Spectrum spec = forward_fourier(phi);
    dxi = spec.dxi();
    values.resize(kTableN / 2 + 1);
    for (std::size_t k = 0; k <= kTableN / 2; ++k) {
      // xi_q = (q - N/2) dxi, so xi = k dxi sits at q = N/2 + k (the last entry mirrors q = 0).
      const std::size_t q = k < kTableN / 2 ? kTableN / 2 + k : 0;
      values[k] = spec[q].real();
    }
  }

  double at(double xi) const noexcept {
    const double u = std::abs(xi) / dxi;
    const double last = static_cast<double>(values.size() - 1);
    if (u >= last - 2.0) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    // Four-point Lagrange interpolation on nodes i-1 .. i+2 (mirrored through 0 by evenness).
    const double s = u - static_cast<double>(i);
    const auto v = [&](long k) { return values[static_cast<std::size_t>(std::abs(k))]; };
    const long c = static_cast<long>(i);
    const double f0 = v(c - 1);
    const double f1 = v(c);
    const double f2 = v(c + 1);
    const double f3 = v(c + 2);
    return -s * (s - 1.0) * (s - 2.0) / 6.0 * f0 + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * f1 -
           (s + 1.0) * s * (s - 2.0) / 2.0 * f2 + (s + 1.0) * s * (s - 1.0) / 6.0 * f3;
  }
};

const MollifierTable& table() {
  static const MollifierTable t;
  return t;
}

bool has_warning(double mean, double l1) { return std::abs(mean) > 1e-6 * l1; }

}  // namespace

double mollifier_normalization() noexcept { return table().normalization; }

double mollifier(double x) noexcept { return table().normalization * raw_bump(x); }

double mollifier_hat(double xi) noexcept { return table().at(xi); }

std::vector<double> MaximalConfig::scales() const {
  validate();
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double s = s_min * std::pow(ratio, k);
    if (s > s_max * (1.0 + 1e-12)) break;
    out.push_back(s);
  }
  return out;
}

MaximalConfig MaximalConfig::for_signal(const SampledSignal& f) {
  MaximalConfig c;
  c.s_min = f.dx();
  c.s_max = f.grid().width() / 4.0;
  return c;
}

void MaximalConfig::validate() const {
  if (!(s_min > 0.0) || !(s_max >= s_min) || !std::isfinite(s_max)) {
    throw InvalidInput("maximal-function scale grid is empty: need 0 < s_min <= s_max");
  }
  if (!(ratio > 1.0)) throw InvalidInput("maximal-function scale ratio must exceed 1");
}

SampledSignal maximal_function(const SampledSignal& f, const MaximalConfig& cfg) {
  const std::vector<double> scales = cfg.scales();
  const std::size_t n = f.size();
  std::vector<double> padded(2 * next_pow2(n), 0.0);
  std::copy(f.values().begin(), f.values().end(), padded.begin());
  const Spectrum spectrum = forward_fourier(SampledSignal(f.x0(), f.dx(), std::move(padded)));
  double reference = 0.0;
  for (const Complex& v : spectrum.values()) reference += std::norm(v);
  reference = std::sqrt(reference);

  std::vector<std::vector<double>> smoothed(scales.size());
  parallel_for(scales.size(), [&](std::size_t k) {
    const double s = scales[k];
    const SampledSignal g = inverse_fourier(spectrum.multiplied([s](double xi) { return mollifier_hat(s * xi); }), reference);
    smoothed[k].assign(g.values().begin(), g.values().begin() + static_cast<long>(n));
  });
  std::vector<double> out(n, 0.0);
  for (const auto& g : smoothed) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(out[i], std::abs(g[i]));
  }
  return SampledSignal(f.x0(), f.dx(), std::move(out));
}

H1Estimate h1_norm_estimate(const SampledSignal& f, const MaximalConfig& cfg) {
  H1Estimate r;
  const double l1 = lp_norm(f, 1.0);
  if (l1 == 0.0) return r;
  const double mean = integral(f);
  if (has_warning(mean, l1)) {
    r.warnings.push_back("signal is not in H1: |integral| exceeds 1e-6 of its L1 norm; the estimate depends on s_max");
  }
  r.value = lp_norm(maximal_function(f, cfg), 1.0);
  return r;
}

SampledSignal riesz_derivative(const SampledSignal& f, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("Riesz derivative order must be positive");
  return apply_multiplier(f, [sigma](double xi) { return std::pow(std::abs(xi), sigma); });
}

double low_pass_profile(double u) noexcept {
  u = std::abs(u);
  if (u <= 1.0) return 1.0;
  if (u >= 2.0) return 0.0;
  const double s = u - 1.0;
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

SampledSignal low_pass(const SampledSignal& f, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("low-pass cutoff must be positive");
  return apply_multiplier(f, [lambda](double xi) { return low_pass_profile(xi / lambda); });
}

std::vector<double> KFunctionalTable::default_lambdas(const SampledSignal& f) {
  const double n = static_cast<double>(next_pow2(f.size()));
  const double dxi = 2.0 * std::numbers::pi / (n * f.dx());
  const double nyquist = std::numbers::pi / f.dx();
  std::vector<double> out;
  for (double l = 4.0 * dxi; l <= nyquist; l *= std::numbers::sqrt2) out.push_back(l);
  return out;
}

KFunctionalTable::KFunctionalTable(const SampledSignal& f, double sigma, const MaximalConfig& cfg,
                                   std::vector<double> lambdas)
    : sigma_(sigma) {
  if (!(sigma > 0.0)) throw DomainError("K-functional order sigma must be positive");
  if (lambdas.empty()) lambdas = default_lambdas(f);
  std::sort(lambdas.begin(), lambdas.end());
  lambdas_.push_back(0.0);
  lambdas_.insert(lambdas_.end(), lambdas.begin(), lambdas.end());
  lambdas_.push_back(std::numeric_limits<double>::infinity());
  a_.assign(lambdas_.size(), 0.0);
  b_.assign(lambdas_.size(), 0.0);

  const Spectrum spectrum = forward_fourier(f);
  const std::size_t n = f.size();
  parallel_for(lambdas_.size(), [&](std::size_t k) {
    const double l = lambdas_[k];
    if (l == 0.0) {
      a_[k] = h1_norm_estimate(f, cfg).value;
      return;
    }
    const bool all = std::isinf(l);
    const auto cut = [&](double xi) { return all ? 1.0 : low_pass_profile(xi / l); };
    if (!all) {
      a_[k] = h1_norm_estimate(apply_multiplier(spectrum, n, [&](double xi) { return 1.0 - cut(xi); }), cfg).value;
    }
    const SampledSignal ig =
        apply_multiplier(spectrum, n, [&](double xi) { return cut(xi) * std::pow(std::abs(xi), sigma); });
    b_[k] = h1_norm_estimate(ig, cfg).value;
  });
}

KFunctionalBound KFunctionalTable::at(double t) const {
  if (!(t > 0.0)) throw DomainError("K-functional argument t must be positive");
  const double weight = std::pow(t, sigma_);
  KFunctionalBound best{sigma_, t, std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t k = 0; k < lambdas_.size(); ++k) {
    const double v = a_[k] + weight * b_[k];
    if (v < best.value) {
      best.value = v;
      best.witness_cutoff = lambdas_[k];
    }
  }
  return best;
}

KFunctionalBound k_functional_upper(const SampledSignal& f, double sigma, double t, const MaximalConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("K-functional argument t must be positive");
  return KFunctionalTable(f, sigma, cfg).at(t);
}

}  // namespace haus
