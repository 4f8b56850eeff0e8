#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "haus/quad.hpp"

namespace haus {

enum class WeightFamily { PowerTail, PowerBump, AdjointHardy, RiemannLiouville, Tabulated };

/// The averaging weight phi. Analytic families are even, nonnegative, and validated
/// against their parameter ranges at construction:
///
///   power-tail(p > 1):        (p - 1) / (2 |t|^p)          on |t| > 1
///   power-bump(p < 1/2):      (1 - p) / (2 |t|^p)          on 0 < |t| < 1
///   adjoint-hardy:            power-bump with p = 0
///   riemann-liouville(a > 0): (1 + a) / 2 (1 - |t|)^a      on 0 < |t| < 1
///
/// Tabulated weights interpolate linearly on their table hull.
class WeightSpec {
 public:
  static WeightSpec power_tail(double p);
  static WeightSpec power_bump(double p);
  static WeightSpec adjoint_hardy();
  static WeightSpec riemann_liouville(double alpha);
  static WeightSpec tabulated(std::vector<double> t, std::vector<double> phi);

  WeightFamily family() const noexcept { return family_; }
  /// p for the power families, alpha for riemann-liouville, 0 for tabulated.
  double parameter() const noexcept { return parameter_; }
  bool analytic() const noexcept { return family_ != WeightFamily::Tabulated; }
  std::string family_name() const;
  std::string label() const;

  /// phi(t); raises OutOfRange for a tabulated weight queried outside its table.
  double operator()(double t) const;
  double value_or_zero(double t) const noexcept;
  /// phi(t) + phi(-t) for t > 0.
  double folded(double t) const noexcept;
  /// lim phi(t) as t -> 0+ (may be +inf).
  double origin_limit() const noexcept;

  std::vector<quad::Interval> support() const;
  /// Support of `folded` on (0, inf), merged.
  std::vector<quad::Interval> folded_support() const;
  std::vector<double> singular_points() const;

  const std::vector<double>& table_t() const noexcept { return table_t_; }
  const std::vector<double>& table_phi() const noexcept { return table_phi_; }

 private:
  WeightSpec(WeightFamily family, double parameter) : family_(family), parameter_(parameter) {}

  WeightFamily family_;
  double parameter_;
  std::vector<double> table_t_;
  std::vector<double> table_phi_;
};

double eval_weight(const WeightSpec& w, double t);

/// The dilation map a(t). The reciprocal map a(t) = 1/t (a(0) = 0) is built in; custom
/// maps must be odd with |a| positive and strictly decreasing on (0, inf), which is
/// checked on a sampled grid at construction.
class ScaleSpec {
 public:
  static ScaleSpec reciprocal();
  static ScaleSpec custom(std::function<double(double)> a, std::function<double(double)> inverse_abs = {},
                          std::string label = "custom");

  bool is_reciprocal() const noexcept { return reciprocal_; }
  bool has_inverse() const noexcept { return reciprocal_ || static_cast<bool>(inverse_abs_); }
  const std::string& label() const noexcept { return label_; }

  double operator()(double t) const;
  /// The t > 0 with |a(t)| = y; +inf at y = 0. Raises Unsupported without an inverse.
  double abs_inverse(double y) const;
  double abs_inverse_derivative(double y) const;

 private:
  ScaleSpec() = default;

  bool reciprocal_ = true;
  std::function<double(double)> a_;
  std::function<double(double)> inverse_abs_;
  std::string label_ = "reciprocal";
};

struct AdmissibilityReport {
  double integral_phi = 0.0;
  double l1_phi = 0.0;
  /// \int |phi| |a|^{1/2}; +inf when the quadrature detects divergence.
  double l1_phi_sqrt_a = 0.0;
  bool sqrt_a_diverged = false;
  /// \int |phi| |a|, absent when it diverges.
  std::optional<double> l1_phi_a;
  /// Signed \int phi |a| when it converges; the kernel's value at the origin is this over pi.
  std::optional<double> integral_phi_a;
  bool passed = false;
  std::vector<std::string> notes;
};

AdmissibilityReport check_admissibility(const WeightSpec& w, const ScaleSpec& a);
/// Report fields as a JSON object; divergent integrals are written as null.
std::string admissibility_to_json(const AdmissibilityReport& report, const WeightSpec& w, const ScaleSpec& a);

/// phi-measure of {t : |a(t)| > |x|}, by quadrature over |t| < |a|^{-1}(|x|).
double scale_superlevel_measure(const WeightSpec& w, const ScaleSpec& a, double x);

/// {"family": ..., "p": ..., "alpha": ..., "table": path}; table paths are resolved
/// against base_dir. Table files are CSV with header `t,phi`.
WeightSpec weight_from_json(const std::string& json, const std::string& base_dir = ".");
std::string weight_to_json(const WeightSpec& w);

}  // namespace haus
