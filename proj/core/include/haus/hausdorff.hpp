#pragma once

// Hausdorff operators and partial Hausdorff integrals.
//
//   H f(x)     = \int phi(t) |a(t)| f(a(t) x) dt
//   K(s)       = (1/pi) \int phi(t) sin(|a(t)| s) / s dt,     K_eps(s) = K(s / eps) / eps
//   K^(x)      = phi-measure of {t : |a(t)| > |x|}
//   F_eps      = K_eps * f,   F_eps^(xi) = K^(eps xi) f^(xi)
//
// Kernel and direct evaluations use the substitution u = |a(t)|, under which
// \int phi(t) g(|a(t)|) dt = \int_0^inf psi(u) g(u) du with psi(u) = (phi(t) + phi(-t)) |dt/du|.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "haus/signal.hpp"
#include "haus/weights.hpp"

namespace haus {

/// Weight, scale map and epsilon. Construction checks epsilon > 0 and admissibility.
class OperatorConfig {
 public:
  OperatorConfig(WeightSpec weight, ScaleSpec scale, double epsilon);

  const WeightSpec& weight() const noexcept { return weight_; }
  const ScaleSpec& scale() const noexcept { return scale_; }
  double epsilon() const noexcept { return epsilon_; }
  const AdmissibilityReport& admissibility() const noexcept { return *admissibility_; }

  /// Same weight and scale at another epsilon; the admissibility report is shared.
  OperatorConfig with_epsilon(double epsilon) const;

 private:
  OperatorConfig(WeightSpec weight, ScaleSpec scale, double epsilon,
                 std::shared_ptr<const AdmissibilityReport> report);

  WeightSpec weight_;
  ScaleSpec scale_;
  double epsilon_;
  std::shared_ptr<const AdmissibilityReport> admissibility_;
};

/// The multiplier K^. Analytic families with the reciprocal scale use closed forms;
/// everything else integrates phi over the superlevel set.
class MultiplierProfile {
 public:
  MultiplierProfile(WeightSpec weight, ScaleSpec scale);
  explicit MultiplierProfile(const OperatorConfig& cfg) : MultiplierProfile(cfg.weight(), cfg.scale()) {}

  double operator()(double x) const;
  bool closed_form() const noexcept { return closed_form_; }
  /// Quadrature value regardless of closed-form availability.
  double by_quadrature(double x) const;

 private:
  WeightSpec weight_;
  ScaleSpec scale_;
  bool closed_form_;
};

/// Closed-form K^(x) for an analytic weight with the reciprocal scale.
std::optional<double> closed_form_multiplier(const WeightSpec& w, double x);

struct MultiplierSelfTest {
  std::size_t points = 0;
  double max_discrepancy = 0.0;
  double worst_x = 0.0;
  bool passed = false;
};

/// Compares closed form against quadrature on `points` abscissae in [-4, 4]; passes at 1e-6.
MultiplierSelfTest multiplier_self_test(const WeightSpec& w, std::size_t points = 200);

double multiplier_eval(const OperatorConfig& cfg, double x);

/// psi(u) and its support on (0, inf). Requires the scale map to have an inverse.
class UForm {
 public:
  UForm(const WeightSpec& w, const ScaleSpec& a);

  double psi(double u) const;
  const std::vector<quad::Interval>& support() const noexcept { return support_; }
  /// \int_lo^hi psi over the support.
  double mass(double lo, double hi) const;
  /// True when psi is smooth with algebraic decay on any unbounded piece of its support
  /// (analytic weight, reciprocal scale).
  bool smooth_tail() const noexcept;

 private:
  WeightSpec weight_;
  ScaleSpec scale_;
  std::vector<quad::Interval> support_;
};

class KernelProfile {
 public:
  explicit KernelProfile(const OperatorConfig& cfg);

  /// K(s); at s = 0 the limit (1/pi) \int phi |a| when finite, else SingularPoint.
  double unscaled(double s) const;
  /// K_eps(s) = K(s / eps) / eps.
  double scaled(double s) const;
  double operator()(double s, bool use_scaled) const { return use_scaled ? scaled(s) : unscaled(s); }

  /// K(0), present when \int |phi| |a| converges.
  std::optional<double> origin_value() const noexcept { return origin_; }
  double epsilon() const noexcept { return epsilon_; }
  double l1_phi() const noexcept { return l1_phi_; }

 private:
  std::shared_ptr<const UForm> uform_;
  double epsilon_;
  double l1_phi_;
  std::optional<double> origin_;
};

double kernel_eval(const OperatorConfig& cfg, double s, bool scaled);

/// H f(x) with f linearly interpolated and zero outside its grid.
double apply_hausdorff(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f, double x);
/// H f at every `stride`-th grid point of f (output grid spacing stride * dx).
SampledSignal apply_hausdorff(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f,
                              std::size_t stride = 1);

struct L2BoundCheck {
  double norm_hf = 0.0;
  double norm_f = 0.0;
  double constant = 0.0;  // \int |phi| |a|^{1/2}
  double slack = 0.0;
  bool passed = false;
};

/// ||H f||_2 <= (\int |phi| |a|^{1/2}) ||f||_2 + slack, with H f at every `stride`-th node. A sample
/// at x = 0 where H f is singular is left out.
L2BoundCheck l2_bound_check(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f, double slack = 2e-3,
                            std::size_t stride = 1);

struct PartialResult {
  SampledSignal signal;
  /// Larger of the input and output leakage diagnostics.
  double leakage = 0.0;
  std::vector<std::string> warnings;
  /// Convolution path only: kernel half-window and the heuristic bound on the neglected tail.
  double truncation_radius = 0.0;
  double tail_bound = 0.0;
};

/// F_eps by multiplying the spectrum with K^(eps xi). Leakage above 1e-6 adds a warning.
PartialResult partial_hausdorff_spectral(const OperatorConfig& cfg, const SampledSignal& f);
/// Same, reusing a precomputed spectrum of f (n = f.size()).
PartialResult partial_hausdorff_spectral(const OperatorConfig& cfg, const Spectrum& spectrum, const SampledSignal& f);

/// F_eps as a discrete convolution with sampled K_eps.
PartialResult partial_hausdorff_convolution(const OperatorConfig& cfg, const SampledSignal& f);

/// F_eps(x) by nested quadrature of the defining double integral; slow, used as an oracle.
double partial_hausdorff_direct(const OperatorConfig& cfg, const SampledSignal& f, double x);

}  // namespace haus
