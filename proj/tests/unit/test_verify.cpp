#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <numbers>
#include <regex>

#include "haus/error.hpp"
#include "haus/io.hpp"
#include "haus/verify.hpp"

namespace haus {
namespace {

constexpr double kPi = std::numbers::pi;
const ScaleSpec kRecip = ScaleSpec::reciprocal();

std::vector<double> dyadic(int kmax) {
  std::vector<double> e;
  for (int k = 0; k <= kmax; ++k) e.push_back(std::exp2(-k));
  return e;
}

std::vector<SampledSignal> small_atoms(const Grid& grid) {
  return {make_atom({-10.0, 4.0, AtomShape::SmoothOddBump}, grid), make_atom({5.0, 8.0, AtomShape::DifferenceOfBumps}, grid),
          make_atom({0.0, 16.0, AtomShape::SmoothOddBump}, grid)};
}

TEST(Boundedness, PowerTailOnStandardAtoms) {
  const Grid grid = standard_grid();
  const ExperimentReport r =
      boundedness_sweep(WeightSpec::power_tail(2.0), kRecip, standard_atoms(grid), {1.0, 0.1, 0.01, 0.001});
  EXPECT_TRUE(r.passed);
  EXPECT_LE(*r.summary_value("spread"), 3.0);
  EXPECT_LE(*r.summary_value("max_ratio"), 10.0);
  for (double v : r.metric("l2_ratio_max")) EXPECT_LE(v, 1.0 + 1e-6);
  EXPECT_EQ(r.experiment_id, "boundedness");
  EXPECT_EQ(r.epsilon_grid.size(), 4u);
}

TEST(Boundedness, RatiosAreScaleInvariant) {
  const Grid grid = Grid::centered(1.0 / 16.0, 2048);
  const std::vector<SampledSignal> atoms = small_atoms(grid);
  std::vector<SampledSignal> scaled;
  for (const SampledSignal& f : atoms) scaled.push_back(f.scaled(7.0));
  const WeightSpec w = WeightSpec::riemann_liouville(0.5);
  const ExperimentReport a = boundedness_sweep(w, kRecip, atoms, {1.0, 0.1});
  const ExperimentReport b = boundedness_sweep(w, kRecip, scaled, {1.0, 0.1});
  const auto& x = a.metric("h1_ratio_max");
  const auto& y = b.metric("h1_ratio_max");
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(x[k], y[k], 1e-12 * x[k]);
}

TEST(Boundedness, InvalidSignals) {
  const Grid grid = Grid::centered(1.0 / 16.0, 1024);
  EXPECT_THROW(boundedness_sweep(WeightSpec::power_tail(2.0), kRecip, {SampledSignal::zeros(grid)}, {1.0}), DomainError);
  const SampledSignal bump = SampledSignal::from_function(grid, [](double x) { return smooth_bump(x); });
  EXPECT_THROW(boundedness_sweep(WeightSpec::power_tail(2.0), kRecip, {bump}, {1.0}), DomainError);
  EXPECT_THROW(boundedness_sweep(WeightSpec::power_tail(2.0), kRecip, small_atoms(grid), {0.1, 1.0}), InvalidInput);
  EXPECT_THROW(boundedness_sweep(WeightSpec::power_tail(2.0), kRecip, {}, {1.0}), InvalidInput);
}

TEST(Convergence, ExactReproductionForBandLimitedInput) {
  const SampledSignal f = make_bandlimited(4.0, Grid::centered(1.0 / 16.0, 4096));
  const ExperimentReport r = convergence_sweep(WeightSpec::riemann_liouville(1.0), kRecip, f, 1.0, dyadic(5));
  const auto& rel = r.metric("l2_relative_error");
  for (std::size_t k = 0; k < rel.size(); ++k) {
    if (r.epsilon_grid[k] <= 0.25) {
      EXPECT_LE(rel[k], 1e-6) << "eps = " << r.epsilon_grid[k];
    }
  }
  EXPECT_TRUE(r.passed);
  const RateFit fit = rate_fit(r, "l2_error", 1e-9 * lp_norm(f, 2.0));
  EXPECT_FALSE(fit.slope.has_value());
  EXPECT_FALSE(fit.flag.empty());
  EXPECT_FALSE(r.fitted_rate.has_value());
}

TEST(Convergence, ZeroSignalHasZeroErrors) {
  const ExperimentReport r =
      convergence_sweep(WeightSpec::power_tail(2.0), kRecip, SampledSignal::zeros(Grid::centered(0.1, 256)), 1.0, dyadic(3));
  EXPECT_TRUE(r.passed);
  for (double v : r.metric("l2_error")) EXPECT_EQ(v, 0.0);
  for (double v : r.metric("h1_error")) EXPECT_EQ(v, 0.0);
}

TEST(Convergence, GaussianDerivativeErrorDecreasesStrictly) {
  const ExperimentReport r =
      convergence_sweep(WeightSpec::power_tail(2.0), kRecip, gaussian_derivative(standard_grid()), 1.0, dyadic(8));
  const auto& e = r.metric("l2_error");
  for (std::size_t k = 1; k < e.size(); ++k) EXPECT_LT(e[k], e[k - 1]);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(*r.summary_value("k_functional_decay"), 0.01);
  ASSERT_TRUE(r.fitted_rate.has_value());
  EXPECT_NEAR(*r.fitted_rate, 1.0, 0.1);
}

TEST(Convergence, Rates) {
  const SampledSignal f = gaussian_derivative(standard_grid());
  const ExperimentReport r = convergence_sweep(WeightSpec::power_tail(1.5), kRecip, f, 0.5, dyadic(8));
  const RateFit fit = rate_fit(r);
  ASSERT_TRUE(fit.slope.has_value());
  EXPECT_GE(*fit.slope, 0.4);
  EXPECT_LE(*fit.slope, 0.6);
  EXPECT_GE(fit.points_used, 4u);
}

TEST(Convergence, RejectsBadArguments) {
  const SampledSignal f = gaussian_derivative(Grid::centered(1.0 / 16.0, 512));
  EXPECT_THROW(convergence_sweep(WeightSpec::power_tail(2.0), kRecip, f, 0.0, dyadic(3)), DomainError);
  EXPECT_THROW(convergence_sweep(WeightSpec::power_tail(2.0), kRecip, f, 1.0, {}), InvalidInput);
  const SampledSignal g = SampledSignal::from_function(Grid::centered(1.0 / 16.0, 512), [](double x) { return std::exp(-x * x); });
  EXPECT_THROW(convergence_sweep(WeightSpec::power_tail(2.0), kRecip, g, 1.0, dyadic(3)), DomainError);
}

TEST(RateFit, SyntheticPowerLaw) {
  ExperimentReport r;
  r.epsilon_grid = dyadic(7);
  std::vector<double> e;
  for (double x : r.epsilon_grid) e.push_back(3.0 * std::pow(x, 0.75));
  r.set_metric("l2_error", e);
  const RateFit fit = rate_fit(r);
  ASSERT_TRUE(fit.slope.has_value());
  EXPECT_NEAR(*fit.slope, 0.75, 1e-12);
  r.set_metric("l2_error", std::vector<double>(r.epsilon_grid.size(), 0.0));
  EXPECT_FALSE(rate_fit(r).slope.has_value());
}

TEST(Hormander, PowerTailWithinBound) {
  const ExperimentReport r = hormander_check(WeightSpec::power_tail(2.0), kRecip, default_hormander_grid());
  EXPECT_TRUE(r.passed);
  EXPECT_LE(*r.summary_value("sup_as_written"), 3.0 / kPi + 0.05);
  EXPECT_NEAR(*r.summary_value("constant_three_over_two_pi"), 3.0 / (2.0 * kPi), 1e-12);
  EXPECT_NEAR(*r.summary_value("bound_three_over_pi"), 3.0 / kPi, 1e-12);
}

TEST(Hormander, FarFieldIsSmallAndEven) {
  const KernelProfile k(OperatorConfig(WeightSpec::power_tail(2.0), kRecip, 1.0));
  EXPECT_LE(hormander_as_written(k, 100.0), 0.05);
  EXPECT_EQ(hormander_as_written(k, 1.5), hormander_as_written(k, -1.5));
  EXPECT_THROW(hormander_as_written(k, 0.0), DomainError);
  EXPECT_THROW(hormander_check(WeightSpec::power_tail(2.0), kRecip, {}), InvalidInput);
  EXPECT_THROW(hormander_check(WeightSpec::power_tail(2.0), kRecip, {0.0}), InvalidInput);
}

TEST(RateConditions, ClosedFormBehaviour) {
  const ExperimentReport rl =
      multiplier_rate_conditions(OperatorConfig(WeightSpec::riemann_liouville(1.0), kRecip, 1.0), 1.0, 1.0);
  EXPECT_EQ(*rl.summary_value("sup_ratio"), 0.0);
  EXPECT_TRUE(rl.passed);

  const OperatorConfig p2(WeightSpec::power_tail(2.0), kRecip, 1.0);
  const ExperimentReport one = multiplier_rate_conditions(p2, 1.0, 1.0);
  EXPECT_TRUE(one.passed);
  EXPECT_NEAR(*one.summary_value("sup_ratio"), 1.0, 1e-12);
  // |K^'| = 1 on the annulus, so the integral is R and the ratio is 1 at every radius.
  for (double v : one.metric("annulus_ratio")) EXPECT_NEAR(v, 1.0, 1e-4);

  const ExperimentReport two = multiplier_rate_conditions(p2, 2.0, 1.0);
  EXPECT_FALSE(two.passed);
  EXPECT_THROW(multiplier_rate_conditions(p2, 0.0, 1.0), DomainError);
  EXPECT_THROW(multiplier_rate_conditions(p2, 1.0, -1.0), DomainError);
}

TEST(Canned, MultiplierReportAndExactReproduction) {
  const ExperimentReport m = multiplier_report(OperatorConfig(WeightSpec::power_bump(0.25), kRecip, 1.0));
  EXPECT_TRUE(m.passed);
  EXPECT_NEAR(*m.summary_value("khat_at_0"), 1.0, 1e-8);
  const ExperimentReport e = exact_reproduction(WeightSpec::power_bump(0.0), kRecip, 4.0, Grid::centered(1.0 / 16.0, 4096));
  EXPECT_TRUE(e.passed);
  EXPECT_GT(*e.summary_value("error_at_4_over_b"), 1e-3);
  const ExperimentReport t = exact_reproduction(WeightSpec::power_tail(2.0), kRecip, 4.0, Grid::centered(1.0 / 16.0, 4096));
  EXPECT_FALSE(t.passed);
}

TEST(Canned, AdjointHardyIdentityAndPathConsistency) {
  const ExperimentReport id = adjoint_hardy_identity([](double t) { return std::exp(-(t - 1.0) * (t - 1.0)); },
                                                     Grid::centered(1.0 / 32.0, 4096), {-3.0, -1.0, 0.5, 1.5, 4.0});
  EXPECT_TRUE(id.passed);
  const ExperimentReport pc = path_consistency(OperatorConfig(WeightSpec::power_tail(2.0), kRecip, 0.25),
                                               make_atom({0.0, 2.0, AtomShape::SmoothOddBump}, Grid::centered(1.0 / 16.0, 4096)));
  EXPECT_TRUE(pc.passed);
}

TEST(Reports, JsonFieldsAndDeterminism) {
  const OperatorConfig cfg(WeightSpec::power_tail(2.0), kRecip, 1.0);
  const ExperimentReport r = multiplier_rate_conditions(cfg, 1.0, 1.0);
  const auto j = nlohmann::json::parse(report_to_json(r));
  for (const char* key : {"experiment_id", "config_digest", "epsilon_grid", "metrics", "fitted_rate", "bound_constant",
                          "passed", "notes", "summary", "timestamp", "version"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["version"], kReportVersion);
  EXPECT_TRUE(std::regex_match(j["timestamp"].get<std::string>(), std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
  EXPECT_EQ(j["config_digest"].get<std::string>().size(), 16u);

  const ExperimentReport again = multiplier_rate_conditions(cfg, 1.0, 1.0);
  EXPECT_EQ(report_to_json(r, false), report_to_json(again, false));
  EXPECT_FALSE(nlohmann::json::parse(report_to_json(r, false)).contains("timestamp"));
  EXPECT_NE(r.config_digest, multiplier_rate_conditions(cfg, 1.0, 2.0).config_digest);
}

TEST(Reports, CsvCarriesFittedRate) {
  ExperimentReport r;
  r.epsilon_grid = {1.0, 0.5, 0.25};
  r.set_metric("l2_error", {1.0, 0.5, 0.25});
  r.set_metric("short", {1.0});
  r.fitted_rate = 1.0;
  const std::string path = (std::filesystem::temp_directory_path() / "haus_report.csv").string();
  write_report_csv(path, r);
  const CsvTable t = read_csv(path);
  EXPECT_EQ(t.header, (std::vector<std::string>{"epsilon", "l2_error", "fitted_rate"}));
  EXPECT_EQ(t.column("fitted_rate"), (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_EQ(t.column("epsilon"), r.epsilon_grid);
  EXPECT_THROW(r.metric("missing"), InvalidInput);
}

TEST(Reports, DigestIsStable) {
  EXPECT_EQ(config_digest(""), "cbf29ce484222325");
  EXPECT_EQ(config_digest("a"), "af63dc4c8601ec8c");
}

}  // namespace
}  // namespace haus
