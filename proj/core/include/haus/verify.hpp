#pragma once

// Numerical experiments around the operators: uniform H1 boundedness of F_eps, convergence
// F_eps -> f, empirical rates, the kernel smoothness integral, and the multiplier conditions
// behind the rate estimate. Every experiment returns an ExperimentReport.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "haus/hardy.hpp"
#include "haus/hausdorff.hpp"
#include "haus/signal.hpp"

namespace haus {

inline constexpr const char* kReportVersion = "0.1.0";

struct ExperimentReport {
  std::string experiment_id;
  std::string config_digest;
  /// Strictly decreasing.
  std::vector<double> epsilon_grid;
  /// Named series, one value per epsilon_grid entry.
  std::vector<std::pair<std::string, std::vector<double>>> metrics;
  std::optional<double> fitted_rate;
  std::optional<double> bound_constant;
  bool passed = false;
  std::vector<std::string> notes;
  /// Scalar results that are not per-epsilon.
  std::vector<std::pair<std::string, double>> summary;

  const std::vector<double>& metric(const std::string& name) const;
  std::optional<double> summary_value(const std::string& name) const;
  void set_metric(const std::string& name, std::vector<double> values);
  void set_summary(const std::string& name, double value);
};

/// JSON with the report fields plus "timestamp" (ISO 8601, UTC) and "version".
std::string report_to_json(const ExperimentReport& report, bool with_timestamp = true);
/// CSV with an `epsilon` column followed by every metric, plus a constant `fitted_rate`
/// column when a rate was fitted.
void write_report_csv(const std::string& path, const ExperimentReport& report);

/// 64-bit FNV-1a of a canonical configuration string, as 16 hex digits.
std::string config_digest(const std::string& canonical);

/// Grid and atoms used by the canned experiments: dx = 1/16, 8192 points centered on 0,
/// and mean-zero atoms with halfwidths between 8 and 64.
Grid standard_grid();
std::vector<SampledSignal> standard_atoms(const Grid& grid, std::size_t count = 10);
/// f(x) = -x exp(-x^2 / 2).
SampledSignal gaussian_derivative(const Grid& grid);

struct BoundednessOptions {
  double spread_budget = 3.0;
  double max_budget = 10.0;
  /// Uniformity is judged over epsilon in this window.
  double eps_lo = 1e-3;
  double eps_hi = 1.0;
  double l2_slack = 1e-8;
};

ExperimentReport boundedness_sweep(const WeightSpec& w, const ScaleSpec& a, const std::vector<SampledSignal>& signals,
                                   const std::vector<double>& eps_grid, const BoundednessOptions& options = {});

struct ConvergenceOptions {
  /// Allowed relative increase between consecutive errors.
  double slack = 0.05;
  /// Required final/initial ratio of the H1 error.
  double final_fraction = 0.01;
  /// Errors below floor * (norm of f) count as zero.
  double floor = 1e-9;
};

ExperimentReport convergence_sweep(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f, double sigma,
                                   const std::vector<double>& eps_grid, const ConvergenceOptions& options = {});

struct RateFit {
  std::optional<double> slope;
  std::size_t points_used = 0;
  std::string flag;  // empty, or why the rate is undefined
};

/// Least-squares slope of log(error) against log(eps) over the smallest-eps half of the grid.
RateFit rate_fit(const ExperimentReport& report, const std::string& metric = "l2_error", double floor = 0.0);

struct HormanderOptions {
  std::vector<double> eps_grid{1.0, 0.1, 0.001};
  /// Relative tolerance of the inner integrals.
  double y_resolution = 1e-4;
  double slack = 0.05;
};

/// Default x grid {0.25, 0.5, 1, 2, 4}.
std::vector<double> default_hormander_grid();

/// I(x, eps) = \int_{|y| <= |x|/2} |K_eps(x - y) - K_eps(x)| dy.
double hormander_as_written(const KernelProfile& kernel, double x, double rel_tol = 1e-4);
/// J(y, eps) = \int_{|x| >= 2|y|} |K_eps(x - y) - K_eps(x)| dx.
double hormander_standard(const KernelProfile& kernel, double y, double rel_tol = 1e-4);

ExperimentReport hormander_check(const WeightSpec& w, const ScaleSpec& a, const std::vector<double>& x_grid,
                                 const HormanderOptions& options = {});

ExperimentReport multiplier_rate_conditions(const OperatorConfig& cfg, double sigma, double d);

/// K^(0), sup |K^| over `samples` points of [-extent, extent] against ||phi||_1, and the
/// closed-form self-test where one exists. No epsilon dependence.
ExperimentReport multiplier_report(const OperatorConfig& cfg, std::size_t samples = 10000, double extent = 50.0);

/// Relative L2 error of F_eps for a band-limited f of bandwidth B at eps = c / B,
/// c in {4, 2, 1, 0.5, 0.25}. Passes when the error is <= 1e-6 for c <= 1 and > 1e-3 at c = 4,
/// which holds for weights whose multiplier is 1 on [-1, 1].
ExperimentReport exact_reproduction(const WeightSpec& w, const ScaleSpec& a, double bandwidth, const Grid& grid);

/// Spectral against convolution (relative L2) and against direct quadrature at `points`
/// grid points spread over the middle half of the region where |f| >= 1e-3 max |f|
/// (relative to the largest |F_eps| there).
ExperimentReport path_consistency(const OperatorConfig& cfg, const SampledSignal& f, std::size_t points = 5,
                                  double tolerance = 1e-3);

/// ||F_eps||_2 <= ||phi||_1 ||f||_2 + 1e-8 per eps, and ||H f||_2 <= (\int |phi| |a|^(1/2)) ||f||_2 + 2e-3
/// with H evaluated at every `stride`-th grid point.
ExperimentReport l2_bounds(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f,
                           const std::vector<double>& eps_grid, std::size_t stride = 8);

/// H f for the adjoint-Hardy weight against (1/2) \int_{|t| > |x|} f(t) / |t| dt computed by
/// quadrature on the analytic f.
ExperimentReport adjoint_hardy_identity(const std::function<double(double)>& f, const Grid& grid,
                                        const std::vector<double>& points, double tolerance = 2e-3);

}  // namespace haus
