#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "haus/error.hpp"
#include "haus/signal.hpp"
#include "haus/weights.hpp"

namespace haus {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<WeightSpec> families() {
  return {WeightSpec::power_tail(1.5),   WeightSpec::power_tail(2.0),        WeightSpec::power_bump(0.0),
          WeightSpec::power_bump(0.25),  WeightSpec::adjoint_hardy(),        WeightSpec::riemann_liouville(0.5),
          WeightSpec::riemann_liouville(1.0)};
}

// \int |phi| |t|^{-1/2} over the whole line, from antiderivatives and Beta integrals.
double sqrt_a_oracle(const WeightSpec& w) {
  const double p = w.parameter();
  switch (w.family()) {
    case WeightFamily::PowerTail: return (p - 1.0) / (p - 0.5);
    case WeightFamily::PowerBump:
    case WeightFamily::AdjointHardy: return (1.0 - p) / (0.5 - p);
    case WeightFamily::RiemannLiouville: return (1.0 + p) * std::beta(0.5, p + 1.0);
    case WeightFamily::Tabulated: break;
  }
  return NAN;
}

TEST(Weights, FamilyFormulas) {
  EXPECT_DOUBLE_EQ(eval_weight(WeightSpec::power_tail(2.0), 2.0), 0.125);
  EXPECT_EQ(eval_weight(WeightSpec::power_tail(2.0), 0.5), 0.0);
  EXPECT_DOUBLE_EQ(eval_weight(WeightSpec::riemann_liouville(1.0), 0.5), 0.5);
  EXPECT_DOUBLE_EQ(eval_weight(WeightSpec::power_bump(0.25), -0.5), 0.375 * std::pow(0.5, -0.25));
  EXPECT_DOUBLE_EQ(eval_weight(WeightSpec::adjoint_hardy(), 0.9), 0.5);
  EXPECT_EQ(eval_weight(WeightSpec::adjoint_hardy(), 1.5), 0.0);
}

TEST(Weights, AnalyticFamiliesAreEvenAndNonnegative) {
  for (const WeightSpec& w : families()) {
    for (double t = 0.013; t < 6.0; t += 0.0917) {
      EXPECT_EQ(eval_weight(w, t), eval_weight(w, -t)) << w.label();
      EXPECT_GE(eval_weight(w, t), 0.0) << w.label();
    }
  }
}

TEST(Weights, ParameterRangesAreEnforced) {
  EXPECT_THROW(WeightSpec::power_bump(0.6), DomainError);
  EXPECT_THROW(WeightSpec::power_bump(0.5), DomainError);
  EXPECT_THROW(WeightSpec::power_tail(1.0), DomainError);
  EXPECT_THROW(WeightSpec::riemann_liouville(0.0), DomainError);
  EXPECT_THROW(WeightSpec::power_tail(NAN), InvalidInput);
  EXPECT_EQ(WeightSpec::adjoint_hardy().parameter(), 0.0);
}

TEST(Weights, TabulatedOutsideTableIsOutOfRange) {
  const WeightSpec w = WeightSpec::tabulated({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(w(0.25), 0.75);
  EXPECT_THROW(w(1.5), OutOfRange);
  EXPECT_EQ(w.value_or_zero(1.5), 0.0);
  EXPECT_THROW(WeightSpec::tabulated({0.0, 0.0}, {1.0, 1.0}), InvalidInput);
}

TEST(Admissibility, PowerTailTwo) {
  const AdmissibilityReport r = check_admissibility(WeightSpec::power_tail(2.0), ScaleSpec::reciprocal());
  EXPECT_NEAR(r.integral_phi, 1.0, 1e-10);
  EXPECT_NEAR(r.l1_phi_sqrt_a, 2.0 / 3.0, 1e-10);
  EXPECT_TRUE(r.passed);
  ASSERT_TRUE(r.integral_phi_a.has_value());
  EXPECT_NEAR(*r.integral_phi_a, 0.5, 1e-10);
}

TEST(Admissibility, RiemannLiouvilleOneUsesFullLineBetaIntegral) {
  // Both half-lines contribute B(1/2, 2) = 4/3 each, weighted by (1 + alpha) / 2 = 1.
  const AdmissibilityReport r = check_admissibility(WeightSpec::riemann_liouville(1.0), ScaleSpec::reciprocal());
  EXPECT_NEAR(r.integral_phi, 1.0, 1e-10);
  EXPECT_NEAR(r.l1_phi_sqrt_a, 2.0 * std::beta(0.5, 2.0) * 1.0, 1e-8);
  EXPECT_NEAR(r.l1_phi_sqrt_a, 8.0 / 3.0, 1e-8);
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.l1_phi_a.has_value());
  ASSERT_FALSE(r.notes.empty());
  EXPECT_NE(r.notes.front().find("diverges"), std::string::npos);
}

TEST(Admissibility, AllFamiliesAgainstOracles) {
  for (const WeightSpec& w : families()) {
    const AdmissibilityReport r = check_admissibility(w, ScaleSpec::reciprocal());
    EXPECT_NEAR(r.integral_phi, 1.0, 1e-8) << w.label();
    EXPECT_NEAR(r.l1_phi_sqrt_a, sqrt_a_oracle(w), 1e-8 * sqrt_a_oracle(w)) << w.label();
    EXPECT_TRUE(r.passed) << w.label();
  }
}

TEST(Admissibility, UnnormalizedTableFails) {
  const WeightSpec w = WeightSpec::tabulated({-2.0, 2.0}, {1.0, 1.0});
  const AdmissibilityReport r = check_admissibility(w, ScaleSpec::reciprocal());
  EXPECT_NEAR(r.integral_phi, 4.0, 1e-10);
  EXPECT_FALSE(r.passed);
}

TEST(Superlevel, ClosedFormValues) {
  const ScaleSpec a = ScaleSpec::reciprocal();
  EXPECT_NEAR(scale_superlevel_measure(WeightSpec::power_tail(2.0), a, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(scale_superlevel_measure(WeightSpec::power_tail(2.0), a, 0.5), 0.5, 1e-12);
  EXPECT_NEAR(scale_superlevel_measure(WeightSpec::adjoint_hardy(), a, 2.0), 0.5, 1e-12);
}

TEST(Superlevel, MatchesBruteForceSincAverage) {
  // (1/pi) \int phi(t) h(x |t|) dt by a plain midpoint sum over 1 < |t| < 2.
  const WeightSpec w = WeightSpec::power_tail(2.0);
  const int m = 400000;
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double t = 1.0 + (i + 0.5) / m;
    s += 2.0 * w(t) * sinc_transform(0.5 * t) / kPi;
  }
  EXPECT_NEAR(s / m, scale_superlevel_measure(w, ScaleSpec::reciprocal(), 0.5), 1e-9);
}

TEST(Superlevel, AgreesWithSincFormulaAtFiftyPoints) {
  const ScaleSpec a = ScaleSpec::reciprocal();
  for (const WeightSpec& w : families()) {
    for (int i = 0; i < 50; ++i) {
      const double x = 0.05 + 0.137 * i;
      const double r = 1.0 / x;
      std::vector<double> cuts{0.0, r, -r, 1.0, -1.0};
      const double viaSinc =
          quad::integrate({[&](double t) {
                             const double v = w.value_or_zero(t);
                             return v == 0.0 ? 0.0 : v * sinc_transform(x * std::abs(t)) / kPi;
                           },
                           w.support(), cuts},
                          1e-12, 1e-14)
              .value;
      EXPECT_NEAR(scale_superlevel_measure(w, a, x), viaSinc, 1e-8) << w.label() << " x = " << x;
    }
  }
}

TEST(Superlevel, MonotoneFromOneToZero) {
  const ScaleSpec a = ScaleSpec::reciprocal();
  for (const WeightSpec& w : families()) {
    EXPECT_NEAR(scale_superlevel_measure(w, a, 0.0), 1.0, 1e-10) << w.label();
    double previous = INFINITY;
    for (double x = 0.0; x < 20.0; x += 0.173) {
      const double v = scale_superlevel_measure(w, a, x);
      EXPECT_LE(v, previous + 1e-12) << w.label() << " x = " << x;
      EXPECT_EQ(v, scale_superlevel_measure(w, a, -x));
      previous = v;
    }
    EXPECT_LT(scale_superlevel_measure(w, a, 1e6), 1e-3) << w.label();
  }
}

TEST(Scale, ReciprocalMap) {
  const ScaleSpec a = ScaleSpec::reciprocal();
  EXPECT_DOUBLE_EQ(a(4.0), 0.25);
  EXPECT_DOUBLE_EQ(a(-2.0), -0.5);
  EXPECT_EQ(a(0.0), 0.0);
  EXPECT_DOUBLE_EQ(a.abs_inverse(0.5), 2.0);
  EXPECT_TRUE(std::isinf(a.abs_inverse(0.0)));
}

TEST(Scale, CustomMapsAreValidated) {
  EXPECT_THROW(ScaleSpec::custom([](double t) { return 1.0 / (t * t); }), InvalidInput);    // even
  EXPECT_THROW(ScaleSpec::custom([](double t) { return t; }), InvalidInput);                // increasing
  const ScaleSpec c = ScaleSpec::custom([](double t) { return t == 0.0 ? 0.0 : 1.0 / (t + t * t * t); });
  EXPECT_FALSE(c.has_inverse());
  EXPECT_THROW(scale_superlevel_measure(WeightSpec::power_tail(2.0), c, 0.5), Unsupported);

  const ScaleSpec d = ScaleSpec::custom([](double t) { return t == 0.0 ? 0.0 : 2.0 / t; },
                                        [](double y) { return y == 0.0 ? INFINITY : 2.0 / y; }, "two-over-t");
  // |2/t| > x  <=>  |t| < 2/x.
  EXPECT_NEAR(scale_superlevel_measure(WeightSpec::power_tail(2.0), d, 1.0), 0.5, 1e-12);
}

TEST(WeightJson, Families) {
  EXPECT_EQ(weight_from_json(R"({"family":"power-tail","p":2})").label(), WeightSpec::power_tail(2.0).label());
  EXPECT_EQ(weight_from_json(R"({"family":"adjoint-hardy"})").family(), WeightFamily::AdjointHardy);
  EXPECT_DOUBLE_EQ(weight_from_json(R"({"family":"riemann-liouville","alpha":0.5})").parameter(), 0.5);
  EXPECT_THROW(weight_from_json(R"({"family":"power-bump","p":0.6})"), DomainError);
  EXPECT_THROW(weight_from_json(R"({"family":"power-tail"})"), InvalidInput);
  EXPECT_THROW(weight_from_json(R"({"family":"cauchy"})"), InvalidInput);
  EXPECT_THROW(weight_from_json("{not json"), InvalidInput);
  const WeightSpec w = WeightSpec::power_bump(0.25);
  EXPECT_EQ(weight_from_json(weight_to_json(w)).label(), w.label());
}

TEST(WeightJson, TabulatedTableIsResolvedAgainstBaseDir) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "haus_weight_table";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "phi.csv");
    out << "t,phi\n-1,0\n0,1\n1,0\n";
  }
  const WeightSpec w = weight_from_json(R"({"family":"tabulated","table":"phi.csv"})", dir.string());
  EXPECT_EQ(w.family(), WeightFamily::Tabulated);
  EXPECT_DOUBLE_EQ(w(0.5), 0.5);
  EXPECT_NEAR(check_admissibility(w, ScaleSpec::reciprocal()).integral_phi, 1.0, 1e-12);
  EXPECT_THROW(weight_from_json(R"({"family":"tabulated","table":"missing.csv"})", dir.string()), IoError);
}

}  // namespace
}  // namespace haus
