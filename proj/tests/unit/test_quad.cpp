#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "haus/error.hpp"
#include "haus/quad.hpp"

namespace haus::quad {
namespace {

TEST(Integrate, PowerTailOverBothHalfLines) {
  const QuadResult r = integrate(Integrand::symmetric([](double t) { return 0.5 / (t * t); }, 1.0, kInf), 1e-12, 1e-14);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  EXPECT_GE(r.abs_error_estimate, 0.0);
  EXPECT_GT(r.panels_used, 0u);
}

TEST(Integrate, ZeroIntegrandIsExactlyZero) {
  EXPECT_EQ(integrate(Integrand::on([](double) { return 0.0; }, -3.0, kInf), 1e-10, 1e-12).value, 0.0);
}

TEST(Integrate, TriangleWeight) {
  const QuadResult r = integrate(Integrand::on([](double t) { return 1.0 - std::abs(t); }, -1.0, 1.0, {0.0}), 1e-10, 1e-12);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(Integrate, EndpointSingularity) {
  // (1 - p) / 2 |t|^-p on |t| < 1 integrates to 1 for p < 1.
  const double p = 0.45;
  const QuadResult r = integrate(
      Integrand::on([p](double t) { return t == 0.0 ? 0.0 : 0.5 * (1.0 - p) * std::pow(std::abs(t), -p); }, -1.0, 1.0, {0.0}),
      1e-10, 1e-12);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Integrate, DivergenceIsReported) {
  // 1/|t| near 0 is not integrable.
  EXPECT_THROW(integrate(Integrand::on([](double t) { return t == 0.0 ? 0.0 : 1.0 / std::abs(t); }, -1.0, 1.0, {0.0}),
                         1e-10, 1e-12),
               ConvergenceFailure);
}

TEST(Integrate, BudgetExhaustionCarriesEstimate) {
  try {
    integrate(Integrand::on([](double t) { return std::sin(1.0 / t); }, 1e-6, 1.0), 1e-14, 0.0, 2000);
    FAIL() << "expected a convergence failure";
  } catch (const ConvergenceFailure& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate()));
    EXPECT_GE(e.error_estimate(), 0.0);
  }
}

TEST(Integrate, Linearity) {
  const auto f = [](double t) { return std::exp(-t * t); };
  const auto g = [](double t) { return 1.0 / (1.0 + t * t); };
  const QuadResult a = integrate(Integrand::on(f, -kInf, kInf), 1e-12, 1e-14);
  const QuadResult b = integrate(Integrand::on(g, -kInf, kInf), 1e-12, 1e-14);
  const QuadResult c = integrate(Integrand::on([&](double t) { return 2.0 * f(t) - 3.0 * g(t); }, -kInf, kInf), 1e-12, 1e-14);
  EXPECT_NEAR(c.value, 2.0 * a.value - 3.0 * b.value,
              2.0 * a.abs_error_estimate + 3.0 * b.abs_error_estimate + c.abs_error_estimate + 1e-14);
}

struct ClosedForm {
  const char* name;
  std::function<double(double)> f;
  double lo;
  double hi;
  double exact;
};

std::vector<ClosedForm> validation_set() {
  const double pi = std::numbers::pi;
  return {
      {"t^2", [](double t) { return t * t; }, 0.0, 2.0, 8.0 / 3.0},
      {"t^-1.5", [](double t) { return std::pow(t, -1.5); }, 1.0, kInf, 2.0},
      {"sqrt", [](double t) { return std::sqrt(t); }, 0.0, 1.0, 2.0 / 3.0},
      {"exp", [](double t) { return std::exp(-t); }, 0.0, kInf, 1.0},
      {"gauss", [](double t) { return std::exp(-t * t); }, -kInf, kInf, std::sqrt(pi)},
      {"damped-cos", [](double t) { return std::exp(-t) * std::cos(3.0 * t); }, 0.0, kInf, 0.1},
      {"damped-sin", [](double t) { return std::exp(-2.0 * t) * std::sin(t); }, 0.0, kInf, 0.2},
      {"log", [](double t) { return std::log(t); }, 0.0, 1.0, -1.0},
      {"cauchy", [](double t) { return 1.0 / (1.0 + t * t); }, -kInf, kInf, pi},
      {"t^-0.4", [](double t) { return std::pow(t, -0.4); }, 0.0, 1.0, 1.0 / 0.6},
  };
}

TEST(Integrate, ErrorEstimatesAreHonest) {
  for (const ClosedForm& c : validation_set()) {
    const QuadResult r = integrate(Integrand::on(c.f, c.lo, c.hi, {}), 1e-8, 0.0);
    const double err = std::abs(r.value - c.exact);
    EXPECT_LE(err, 10.0 * r.abs_error_estimate + 4e-16 * std::abs(c.exact)) << c.name;
  }
}

TEST(Integrate, TighterToleranceNeverHurts) {
  // Equal up to rounding counts as not worse: an extra panel can move the sum by an ulp or two.
  for (const ClosedForm& c : validation_set()) {
    double previous = INFINITY;
    for (double tol : {1e-4, 5e-5, 2.5e-5, 1.25e-5}) {
      const double err = std::abs(integrate(Integrand::on(c.f, c.lo, c.hi, {}), tol, 0.0).value - c.exact);
      EXPECT_LE(err, previous + 1e-13 * std::abs(c.exact)) << c.name << " tol " << tol;
      previous = err;
    }
  }
}

TEST(Oscillatory, ReciprocalSine) {
  const QuadResult r = integrate_oscillatory(
      Integrand::on([](double t) { return std::sin(1.0 / t) / (t * t); }, 1.0, kInf), 0.0, 1e-10, 1e-12);
  EXPECT_NEAR(r.value, 1.0 - std::cos(1.0), 1e-9);
}

TEST(Oscillatory, ZeroFrequencyMatchesIntegrate) {
  const Integrand g = Integrand::on([](double t) { return 3.0 * t * t * t - t + 2.0; }, -1.5, 2.5);
  EXPECT_NEAR(integrate_oscillatory(g, 0.0, 1e-12, 1e-14).value, integrate(g, 1e-12, 1e-14).value, 1e-12);
}

TEST(Oscillatory, EvenIntegrandOverSymmetricSupport) {
  const auto f = [](double t) { return std::cos(4.0 * t) * std::exp(-std::abs(t)); };
  const double both = integrate_oscillatory(Integrand::symmetric(f, 0.5, kInf), 4.0, 1e-12, 1e-14).value;
  const double half = integrate_oscillatory(Integrand::on(f, 0.5, kInf), 4.0, 1e-12, 1e-14).value;
  EXPECT_NEAR(both, 2.0 * half, 1e-10);
}

TEST(Oscillatory, SineTransformOfDecayingAmplitude) {
  // \int_0^inf e^{-u} sin(w u) du = w / (1 + w^2).
  for (double w : {0.5, 5.0, 200.0}) {
    const QuadResult r = integrate_sine([](double u) { return std::exp(-u); }, w, 0.0, kInf, 1e-10, 1e-14);
    EXPECT_NEAR(r.value, w / (1.0 + w * w), 1e-10) << "w = " << w;
  }
}

TEST(Wynn, AcceleratesAlternatingSeries) {
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 0; k < 12; ++k) {
    s += (k % 2 ? -1.0 : 1.0) / (k + 1);
    partial.push_back(s);
  }
  EXPECT_NEAR(wynn_epsilon(partial), std::log(2.0), 1e-8);
}

}  // namespace
}  // namespace haus::quad
