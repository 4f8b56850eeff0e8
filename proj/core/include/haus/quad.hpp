#pragma once

// Adaptive quadrature over the real line.
//
// `integrate` is a global-adaptive 21-point Gauss-Kronrod scheme. Unbounded ends are
// mapped onto [0, 1) by t = a + u / (1 - u); singular points become panel boundaries and
// bisection grades toward them. A panel chain at a boundary whose contribution stops
// shrinking under refinement is reported as a Divergence rather than a number.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace haus::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultBudget = 1'000'000;

struct Interval {
  double lo;
  double hi;
};

struct Integrand {
  std::function<double(double)> evaluator;
  std::vector<Interval> support;
  std::vector<double> singular_points;

  static Integrand on(std::function<double(double)> fn, double lo, double hi, std::vector<double> singular = {});
  /// Support [-outer, -inner] U [inner, outer]; outer may be infinite.
  static Integrand symmetric(std::function<double(double)> fn, double inner, double outer,
                             std::vector<double> singular = {});
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t panels_used = 0;
  std::size_t evaluations = 0;
};

QuadResult integrate(const Integrand& g, double rel_tol, double abs_tol,
                     std::size_t max_evaluations = kDefaultBudget);

/// As `integrate`, for integrands oscillating at `frequency`: finite pieces are pre-split
/// into half-period panels, unbounded pieces are summed half-period by half-period with
/// epsilon-algorithm acceleration of the partial sums.
QuadResult integrate_oscillatory(const Integrand& g, double frequency, double rel_tol, double abs_tol = 0.0,
                                 std::size_t max_evaluations = kDefaultBudget);

/// \int_lo^hi amplitude(u) sin(omega u) du with hi possibly infinite, for a
/// non-oscillatory amplitude that may be singular at either finite end. Cost does not
/// grow with omega (Chebyshev-moment rules away from the ends).
QuadResult integrate_sine(const std::function<double(double)>& amplitude, double omega, double lo, double hi,
                          double rel_tol, double abs_tol);

/// Wynn epsilon-algorithm limit estimate of a sequence of partial sums.
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace haus::quad
