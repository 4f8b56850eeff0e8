#include "haus/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

#include "haus/error.hpp"
#include "haus/io.hpp"
#include "haus/parallel.hpp"
#include "haus/quad.hpp"

namespace haus {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

void require_decreasing(const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidInput("epsilon grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InvalidInput("epsilon values must be positive and finite");
    if (i > 0 && !(grid[i] < grid[i - 1])) throw InvalidInput("epsilon grid must be strictly decreasing");
  }
}

std::string signal_fingerprint(const SampledSignal& f) {
  std::uint64_t h = 14695981039346656037ull;
  const auto mix = [&](double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(f.x0());
  mix(f.dx());
  for (double v : f.values()) mix(v);
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string grid_string(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += fmt(x, 17) + ",";
  return s;
}

std::string canonical_config(const std::string& id, const WeightSpec& w, const ScaleSpec& a,
                             const std::vector<double>& eps, const std::string& extra) {
  return id + "|" + weight_to_json(w) + "|" + a.label() + "|" + grid_string(eps) + "|" + extra;
}

// Nonincreasing within a relative slack, treating values below `floor` as zero.
bool nonincreasing(const std::vector<double>& v, double slack, double floor) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= floor) continue;
    if (v[i] > (1.0 + slack) * v[i - 1] + floor) return false;
  }
  return true;
}

// True when the tail of a scanned sequence stays within `factor` of its head.
bool stays_bounded(const std::vector<double>& v, double factor = 4.0) {
  const std::size_t third = std::max<std::size_t>(1, v.size() / 3);
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < third; ++i) head = std::max(head, v[i]);
  for (std::size_t i = v.size() - third; i < v.size(); ++i) tail = std::max(tail, v[i]);
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return tail <= factor * head + 1e-12;
}

std::string multiplier_note(const MultiplierProfile& m) {
  const double x = 1e-3;
  const double gap = std::abs(m(x) - 1.0);
  if (gap <= 1e-12) return {};
  return "measured K^ is not constant near the origin: |K^(" + fmt(x) + ") - 1| = " + fmt(gap) +
         ", so its derivative does not vanish there and the error decays at a finite rate";
}

}  // namespace

const std::vector<double>& ExperimentReport::metric(const std::string& name) const {
  for (const auto& [key, values] : metrics) {
    if (key == name) return values;
  }
  throw InvalidInput("report has no metric '" + name + "'");
}

std::optional<double> ExperimentReport::summary_value(const std::string& name) const {
  for (const auto& [key, value] : summary) {
    if (key == name) return value;
  }
  return std::nullopt;
}

void ExperimentReport::set_metric(const std::string& name, std::vector<double> values) {
  for (auto& [key, v] : metrics) {
    if (key == name) {
      v = std::move(values);
      return;
    }
  }
  metrics.emplace_back(name, std::move(values));
}

void ExperimentReport::set_summary(const std::string& name, double value) {
  for (auto& [key, v] : summary) {
    if (key == name) {
      v = value;
      return;
    }
  }
  summary.emplace_back(name, value);
}

std::string config_digest(const std::string& canonical) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string report_to_json(const ExperimentReport& r, bool with_timestamp) {
  nlohmann::ordered_json j;
  j["experiment_id"] = r.experiment_id;
  j["config_digest"] = r.config_digest;
  j["epsilon_grid"] = r.epsilon_grid;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [name, values] : r.metrics) metrics[name] = values;
  j["metrics"] = metrics;
  j["fitted_rate"] = r.fitted_rate ? nlohmann::ordered_json(*r.fitted_rate) : nlohmann::ordered_json(nullptr);
  j["bound_constant"] =
      r.bound_constant ? nlohmann::ordered_json(*r.bound_constant) : nlohmann::ordered_json(nullptr);
  j["passed"] = r.passed;
  j["notes"] = r.notes;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [name, value] : r.summary) summary[name] = value;
  j["summary"] = summary;
  if (with_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["timestamp"] = buf;
  }
  j["version"] = kReportVersion;
  return j.dump(2);
}

void write_report_csv(const std::string& path, const ExperimentReport& r) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::size_t rows = r.epsilon_grid.size();
  if (rows > 0) {
    header.push_back("epsilon");
    columns.push_back(r.epsilon_grid);
  } else if (!r.metrics.empty()) {
    rows = r.metrics.front().second.size();
    header.push_back("index");
    std::vector<double> idx(rows);
    for (std::size_t i = 0; i < rows; ++i) idx[i] = static_cast<double>(i);
    columns.push_back(idx);
  }
  for (const auto& [name, values] : r.metrics) {
    if (values.size() != rows) continue;
    header.push_back(name);
    columns.push_back(values);
  }
  if (r.fitted_rate && rows > 0) {
    header.push_back("fitted_rate");
    columns.emplace_back(rows, *r.fitted_rate);
  }
  write_csv(path, header, columns);
}

Grid standard_grid() { return Grid::centered(1.0 / 16.0, 8192); }

std::vector<SampledSignal> standard_atoms(const Grid& grid, std::size_t count) {
  std::vector<SampledSignal> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = count > 1 ? static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
    AtomSpec spec;
    spec.halfwidth = 8.0 * std::pow(8.0, u);
    spec.center = -80.0 + 160.0 * u;
    spec.shape = k % 2 == 0 ? AtomShape::SmoothOddBump : AtomShape::DifferenceOfBumps;
    out.push_back(make_atom(spec, grid));
  }
  return out;
}

SampledSignal gaussian_derivative(const Grid& grid) {
  return SampledSignal::from_function(grid, [](double x) { return -x * std::exp(-0.5 * x * x); });
}

ExperimentReport boundedness_sweep(const WeightSpec& w, const ScaleSpec& a, const std::vector<SampledSignal>& signals,
                                   const std::vector<double>& eps_grid, const BoundednessOptions& options) {
  require_decreasing(eps_grid);
  if (signals.empty()) throw InvalidInput("boundedness sweep needs at least one signal");
  const OperatorConfig base(w, a, eps_grid.front());
  std::string extra;
  for (const SampledSignal& f : signals) {
    const double l1 = lp_norm(f, 1.0);
    if (l1 == 0.0) throw DomainError("zero signal: the norm ratio is undefined");
    if (std::abs(integral(f)) > 1e-6 * l1) throw DomainError("signal does not have zero mean, so it is not in H1");
    extra += signal_fingerprint(f) + ";";
  }

  const std::size_t ns = signals.size();
  const std::size_t ne = eps_grid.size();
  std::vector<std::vector<double>> h1_ratio(ns, std::vector<double>(ne));
  std::vector<std::vector<double>> l2_ratio(ns, std::vector<double>(ne));
  std::vector<std::vector<double>> l2_excess(ns, std::vector<double>(ne));
  std::vector<std::vector<std::string>> warnings(ns);
  const double l1_phi = base.admissibility().l1_phi;

  parallel_for(ns, [&](std::size_t i) {
    const SampledSignal& f = signals[i];
    const MaximalConfig mcfg = MaximalConfig::for_signal(f);
    const Spectrum spectrum = forward_fourier(f);
    const double h1f = h1_norm_estimate(f, mcfg).value;
    const double l2f = lp_norm(f, 2.0);
    for (std::size_t k = 0; k < ne; ++k) {
      const PartialResult F = partial_hausdorff_spectral(base.with_epsilon(eps_grid[k]), spectrum, f);
      const H1Estimate h1F = h1_norm_estimate(F.signal, mcfg);
      const double l2F = lp_norm(F.signal, 2.0);
      h1_ratio[i][k] = h1F.value / h1f;
      l2_ratio[i][k] = l2F / l2f;
      l2_excess[i][k] = l2F - l1_phi * l2f;
      for (const auto& wmsg : F.warnings) warnings[i].push_back("signal " + std::to_string(i) + ", eps " + fmt(eps_grid[k]) + ": " + wmsg);
      for (const auto& wmsg : h1F.warnings) warnings[i].push_back("signal " + std::to_string(i) + ", eps " + fmt(eps_grid[k]) + ": " + wmsg);
    }
  });

  ExperimentReport r;
  r.experiment_id = "boundedness";
  r.config_digest = config_digest(canonical_config(r.experiment_id, w, a, eps_grid,
                                                   extra + fmt(options.spread_budget) + fmt(options.max_budget)));
  r.epsilon_grid = eps_grid;
  std::vector<double> mx(ne, 0.0);
  std::vector<double> mn(ne, std::numeric_limits<double>::infinity());
  std::vector<double> l2mx(ne, 0.0);
  double window_max = 0.0;
  double window_min = std::numeric_limits<double>::infinity();
  double overall_max = 0.0;
  double worst_signal_spread = 1.0;
  bool l2_ok = true;
  for (std::size_t i = 0; i < ns; ++i) {
    double smax = 0.0;
    double smin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ne; ++k) {
      const double v = h1_ratio[i][k];
      mx[k] = std::max(mx[k], v);
      mn[k] = std::min(mn[k], v);
      l2mx[k] = std::max(l2mx[k], l2_ratio[i][k]);
      overall_max = std::max(overall_max, v);
      if (l2_excess[i][k] > options.l2_slack) l2_ok = false;
      if (eps_grid[k] >= options.eps_lo * (1.0 - 1e-12) && eps_grid[k] <= options.eps_hi * (1.0 + 1e-12)) {
        window_max = std::max(window_max, v);
        window_min = std::min(window_min, v);
        smax = std::max(smax, v);
        smin = std::min(smin, v);
      }
    }
    if (smin > 0.0 && std::isfinite(smin)) worst_signal_spread = std::max(worst_signal_spread, smax / smin);
  }
  r.set_metric("h1_ratio_max", mx);
  r.set_metric("h1_ratio_min", mn);
  r.set_metric("l2_ratio_max", l2mx);
  for (std::size_t i = 0; i < ns; ++i) r.set_metric("h1_ratio_signal_" + std::to_string(i), h1_ratio[i]);
  r.bound_constant = overall_max;
  const double spread = window_min > 0.0 ? window_max / window_min : std::numeric_limits<double>::infinity();
  r.set_summary("spread", spread);
  r.set_summary("worst_per_signal_spread", worst_signal_spread);
  r.set_summary("max_ratio", window_max);
  r.set_summary("min_ratio", window_min);
  r.set_summary("l1_phi", l1_phi);
  r.set_summary("spread_budget", options.spread_budget);
  r.set_summary("max_budget", options.max_budget);
  r.passed = spread <= options.spread_budget && window_max <= options.max_budget && l2_ok;
  if (!l2_ok) r.notes.push_back("L2 norm of F_eps exceeded ||phi||_1 ||f||_2 in at least one cell");
  if (spread > options.spread_budget) r.notes.push_back("H1 ratio spread " + fmt(spread) + " exceeds the uniformity budget");
  if (window_max > options.max_budget) r.notes.push_back("H1 ratio " + fmt(window_max) + " exceeds the boundedness budget");
  for (const auto& ws : warnings) r.notes.insert(r.notes.end(), ws.begin(), ws.end());
  return r;
}

ExperimentReport convergence_sweep(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f, double sigma,
                                   const std::vector<double>& eps_grid, const ConvergenceOptions& options) {
  require_decreasing(eps_grid);
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const OperatorConfig base(w, a, eps_grid.front());
  const double l1 = lp_norm(f, 1.0);
  if (l1 > 0.0 && std::abs(integral(f)) > 1e-6 * l1) {
    throw DomainError("signal does not have zero mean, so it is not in H1");
  }
  const std::size_t ne = eps_grid.size();
  ExperimentReport r;
  r.experiment_id = "convergence";
  r.config_digest = config_digest(canonical_config(r.experiment_id, w, a, eps_grid,
                                                   signal_fingerprint(f) + "|sigma=" + fmt(sigma, 17)));
  r.epsilon_grid = eps_grid;

  std::vector<double> l2_err(ne, 0.0);
  std::vector<double> l2_rel(ne, 0.0);
  std::vector<double> h1_err(ne, 0.0);
  std::vector<double> k_upper(ne, 0.0);
  std::vector<double> k_cutoff(ne, 0.0);
  std::vector<double> ratio(ne, 0.0);
  std::vector<std::vector<std::string>> warnings(ne);

  if (l1 == 0.0) {
    r.set_metric("l2_error", l2_err);
    r.set_metric("l2_relative_error", l2_rel);
    r.set_metric("h1_error", h1_err);
    r.set_metric("k_functional_upper", k_upper);
    r.set_metric("h1_error_over_k_upper", ratio);
    r.set_summary("k_functional_decay", 0.0);
    r.passed = true;
    r.notes.push_back("zero signal: every error is zero");
    return r;
  }

  const MaximalConfig mcfg = MaximalConfig::for_signal(f);
  const Spectrum spectrum = forward_fourier(f);
  const double l2f = lp_norm(f, 2.0);
  const double h1f = h1_norm_estimate(f, mcfg).value;
  const KFunctionalTable table(f, sigma, mcfg);

  parallel_for(ne, [&](std::size_t k) {
    const PartialResult F = partial_hausdorff_spectral(base.with_epsilon(eps_grid[k]), spectrum, f);
    const SampledSignal diff = F.signal.minus(f);
    l2_err[k] = lp_norm(diff, 2.0);
    l2_rel[k] = l2_err[k] / l2f;
    const H1Estimate h = h1_norm_estimate(diff, mcfg);
    h1_err[k] = h.value;
    const KFunctionalBound kb = table.at(eps_grid[k]);
    k_upper[k] = kb.value;
    k_cutoff[k] = kb.witness_cutoff;
    ratio[k] = kb.value > 0.0 ? h1_err[k] / kb.value : 0.0;
    for (const auto& wmsg : F.warnings) warnings[k].push_back("eps " + fmt(eps_grid[k]) + ": " + wmsg);
  });

  r.set_metric("l2_error", l2_err);
  r.set_metric("l2_relative_error", l2_rel);
  r.set_metric("h1_error", h1_err);
  r.set_metric("k_functional_upper", k_upper);
  r.set_metric("k_functional_witness_cutoff", k_cutoff);
  r.set_metric("h1_error_over_k_upper", ratio);

  const double l2_floor = options.floor * l2f;
  const double h1_floor = options.floor * h1f;
  const bool mono_l2 = nonincreasing(l2_err, options.slack, l2_floor);
  const bool mono_h1 = nonincreasing(h1_err, options.slack, h1_floor);
  const double first = h1_err.front();
  const double last = h1_err.back();
  const bool decayed = last <= options.final_fraction * first || last <= h1_floor;
  const double k_decay = k_upper.front() > 0.0 ? k_upper.back() / k_upper.front() : 0.0;
  r.set_summary("h1_norm_f", h1f);
  r.set_summary("l2_norm_f", l2f);
  r.set_summary("h1_error_decay", first > 0.0 ? last / first : 0.0);
  r.set_summary("k_functional_decay", k_decay);
  r.set_summary("sigma", sigma);
  double worst_ratio = 0.0;
  for (double v : ratio) worst_ratio = std::max(worst_ratio, v);
  r.set_summary("max_h1_error_over_k_upper", worst_ratio);
  r.passed = mono_l2 && mono_h1 && decayed;

  const RateFit fit = rate_fit(r, "l2_error", l2_floor);
  if (fit.slope) {
    r.fitted_rate = fit.slope;
  } else {
    r.notes.push_back("rate undefined: " + fit.flag);
  }
  if (!mono_l2) r.notes.push_back("L2 error sequence increases by more than the slack");
  if (!mono_h1) r.notes.push_back("H1 error sequence increases by more than the slack");
  if (!decayed) r.notes.push_back("final H1 error exceeds the required fraction of the initial one");
  r.notes.push_back(
      "h1_error_over_k_upper compares the error with an upper bound of the K-functional; only a one-sided reading is "
      "meaningful, and a very large value would point to a pipeline problem rather than to the estimate");
  const std::string note = multiplier_note(MultiplierProfile(base));
  if (!note.empty()) r.notes.push_back(note);
  for (const auto& ws : warnings) r.notes.insert(r.notes.end(), ws.begin(), ws.end());
  return r;
}

RateFit rate_fit(const ExperimentReport& report, const std::string& metric, double floor) {
  RateFit fit;
  const auto& eps = report.epsilon_grid;
  const auto& err = report.metric(metric);
  std::size_t positive = 0;
  for (double e : err) positive += e > floor;
  if (eps.size() < 4 || positive < 4) {
    fit.flag = positive < 4 ? "errors vanish (exact reproduction) at most grid points" : "fewer than 4 epsilon points";
    return fit;
  }
  const std::size_t start = eps.size() / 2;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = start; i < eps.size(); ++i) {
    if (err[i] > floor) {
      lx.push_back(std::log(eps[i]));
      ly.push_back(std::log(err[i]));
    }
  }
  if (lx.size() < 2) {
    fit.flag = "errors in the asymptotic half are at the floor (exact reproduction)";
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  fit.points_used = lx.size();
  fit.slope = sxy / sxx;
  return fit;
}

std::vector<double> default_hormander_grid() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }

// Both integrals are evaluated in the unscaled variable: with X = x / eps,
// I(x, eps) = I(X, 1) and J(y, eps) = J(y / eps, 1). Absolute accuracy is tied to ||phi||_1,
// the scale of the bound being checked.
double hormander_as_written(const KernelProfile& kernel, double x, double rel_tol) {
  if (x == 0.0) throw DomainError("the x grid must exclude 0");
  const double X = std::abs(x) / kernel.epsilon();
  const double kx = kernel.unscaled(X);
  const auto g = [&](double s) { return std::abs(kernel.unscaled(s) - kx); };
  const double abs_tol = rel_tol * kernel.l1_phi();
  return quad::integrate_oscillatory(quad::Integrand::on(g, 0.5 * X, 1.5 * X), 0.5, rel_tol, abs_tol).value;
}

double hormander_standard(const KernelProfile& kernel, double y, double rel_tol) {
  const double Y = std::abs(y) / kernel.epsilon();
  if (Y == 0.0) return 0.0;
  // Beyond 2Y the integrand is O(1/x^2) with an oscillating factor: integrate 8 periods past
  // 2Y and extrapolate the rest from the mean level over the last 2 periods. Diagnostic only,
  // so the tolerances are ten times looser than for the as-written form.
  const double T = 2.0 * Y + 16.0 * kPi;
  const double stretch = 4.0 * kPi;
  const double rel = 10.0 * rel_tol;
  const double abs_tol = rel * kernel.l1_phi();
  double total = 0.0;
  for (int side : {+1, -1}) {
    const auto g = [&](double x) { return std::abs(kernel.unscaled(x - side * Y) - kernel.unscaled(x)); };
    const double near =
        quad::integrate_oscillatory(quad::Integrand::on(g, 2.0 * Y, T - stretch), 0.5, rel, 0.5 * abs_tol).value;
    // The last stretch is weighted by T / stretch in the extrapolation.
    const double last =
        quad::integrate_oscillatory(quad::Integrand::on(g, T - stretch, T), 0.5, rel, 0.5 * abs_tol * stretch / T)
            .value;
    total += near + last + T * last / stretch;
  }
  return total;
}

ExperimentReport hormander_check(const WeightSpec& w, const ScaleSpec& a, const std::vector<double>& x_grid,
                                 const HormanderOptions& options) {
  require_decreasing(options.eps_grid);
  if (x_grid.empty()) throw InvalidInput("x grid is empty");
  for (double x : x_grid) {
    if (x == 0.0 || !std::isfinite(x)) throw InvalidInput("the x grid must exclude 0 and be finite");
  }
  const OperatorConfig base(w, a, options.eps_grid.front());
  const double l1_phi = base.admissibility().l1_phi;
  const std::size_t ne = options.eps_grid.size();
  const std::size_t nx = x_grid.size();

  std::vector<double> as_written(ne * nx);
  std::vector<double> standard(ne * nx);
  parallel_for(ne * nx, [&](std::size_t idx) {
    const std::size_t k = idx / nx;
    const std::size_t i = idx % nx;
    const KernelProfile kernel(base.with_epsilon(options.eps_grid[k]));
    as_written[idx] = hormander_as_written(kernel, x_grid[i], options.y_resolution);
    standard[idx] = hormander_standard(kernel, 0.5 * x_grid[i], options.y_resolution);
  });

  ExperimentReport r;
  r.experiment_id = "hormander";
  r.config_digest = config_digest(canonical_config(r.experiment_id, w, a, options.eps_grid,
                                                   grid_string(x_grid) + fmt(options.y_resolution, 17)));
  r.epsilon_grid = options.eps_grid;
  std::vector<double> sup_w(ne, 0.0);
  std::vector<double> sup_s(ne, 0.0);
  for (std::size_t k = 0; k < ne; ++k) {
    for (std::size_t i = 0; i < nx; ++i) {
      sup_w[k] = std::max(sup_w[k], as_written[k * nx + i]);
      sup_s[k] = std::max(sup_s[k], standard[k * nx + i]);
    }
  }
  r.set_metric("sup_as_written", sup_w);
  r.set_metric("sup_standard", sup_s);
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<double> col(ne);
    for (std::size_t k = 0; k < ne; ++k) col[k] = as_written[k * nx + i];
    r.set_metric("as_written_x=" + fmt(x_grid[i]), col);
  }
  const double sup_all = *std::max_element(sup_w.begin(), sup_w.end());
  const double threshold = 3.0 / kPi * l1_phi + options.slack;
  r.bound_constant = sup_all;
  r.set_summary("sup_as_written", sup_all);
  r.set_summary("sup_standard", *std::max_element(sup_s.begin(), sup_s.end()));
  r.set_summary("bound_three_over_pi", 3.0 / kPi * l1_phi);
  r.set_summary("constant_three_over_two_pi", 3.0 / (2.0 * kPi) * l1_phi);
  r.set_summary("threshold", threshold);
  r.passed = sup_all <= threshold;
  r.notes.push_back("the term-by-term bound gives 3 ||phi||_1 / pi = " + fmt(3.0 / kPi * l1_phi) +
                    "; the smaller constant 3 ||phi||_1 / (2 pi) = " + fmt(1.5 / kPi * l1_phi) +
                    " is recorded for comparison");
  if (sup_all > 1.5 / kPi * l1_phi) {
    r.notes.push_back("measured supremum exceeds 3 ||phi||_1 / (2 pi)");
  }
  r.notes.push_back("standard form integrates over |x| >= 2|y| with y = x/2 for each grid x; its far tail is "
                    "extrapolated from a 1/x^2 envelope");
  return r;
}

ExperimentReport multiplier_rate_conditions(const OperatorConfig& cfg, double sigma, double d) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(d > 0.0)) throw DomainError("d must be positive");
  const MultiplierProfile m(cfg);

  std::vector<double> sup_ratio(41);
  for (int j = 0; j <= 40; ++j) {
    const double x = d * std::exp2(-j);
    sup_ratio[static_cast<std::size_t>(j)] = std::abs(m(x) - 1.0) / std::pow(x, sigma);
  }

  std::vector<double> radii(11);
  std::vector<double> annulus(11);
  std::vector<double> raw(11);
  for (int j = 0; j <= 10; ++j) {
    const double R = d * std::exp2(-j);
    const double h = 1e-6 * R;
    // One-sided near the ends so the stencil never leaves the closed annulus.
    const auto deriv = [&](double x) {
      const double ax = std::abs(x);
      double lo = ax - h;
      double hi = ax + h;
      if (hi > R) hi = ax;
      if (lo < 0.5 * R) lo = ax;
      const double sign = x < 0.0 ? -1.0 : 1.0;
      return sign * (m(hi) - m(lo)) / (hi - lo);
    };
    const auto sq = [&](double x) {
      const double v = deriv(x);
      return v * v;
    };
    double value = 0.0;
    try {
      value = quad::integrate(quad::Integrand::symmetric(sq, 0.5 * R, R), 1e-6, 1e-14 * R).value;
    } catch (const ConvergenceFailure& e) {
      value = e.best_estimate();
    }
    radii[static_cast<std::size_t>(j)] = R;
    raw[static_cast<std::size_t>(j)] = value;
    annulus[static_cast<std::size_t>(j)] = value / std::pow(R, 2.0 * sigma - 1.0);
  }

  ExperimentReport r;
  r.experiment_id = "rate-conditions";
  r.config_digest = config_digest(canonical_config(r.experiment_id, cfg.weight(), cfg.scale(), radii,
                                                   "sigma=" + fmt(sigma, 17) + "|d=" + fmt(d, 17)));
  r.epsilon_grid = radii;
  r.set_metric("annulus_ratio", annulus);
  r.set_metric("annulus_integral", raw);
  const bool sup_bounded = stays_bounded(sup_ratio);
  const bool annulus_bounded = stays_bounded(annulus);
  r.set_summary("sup_ratio", *std::max_element(sup_ratio.begin(), sup_ratio.end()));
  r.set_summary("sup_ratio_at_coarsest", sup_ratio.front());
  r.set_summary("sup_ratio_at_finest", sup_ratio.back());
  r.set_summary("sup_ratio_bounded", sup_bounded ? 1.0 : 0.0);
  r.set_summary("annulus_ratio_max", *std::max_element(annulus.begin(), annulus.end()));
  r.set_summary("annulus_bounded", annulus_bounded ? 1.0 : 0.0);
  r.set_summary("sigma", sigma);
  r.set_summary("d", d);
  r.bound_constant = *std::max_element(sup_ratio.begin(), sup_ratio.end());
  r.passed = sup_bounded && annulus_bounded;
  r.notes.push_back("epsilon_grid holds the annulus radii R = d 2^-j; the sup ratio is scanned on x = d 2^-j, j = 0..40");
  if (!sup_bounded) r.notes.push_back("|K^(x) - 1| / |x|^sigma grows without bound as x -> 0");
  if (!annulus_bounded) r.notes.push_back("annulus integral grows faster than R^(2 sigma - 1)");
  const std::string note = multiplier_note(m);
  if (!note.empty()) r.notes.push_back(note);
  return r;
}

ExperimentReport multiplier_report(const OperatorConfig& cfg, std::size_t samples, double extent) {
  if (samples < 2 || !(extent > 0.0)) throw InvalidInput("multiplier scan needs >= 2 samples and a positive extent");
  const MultiplierProfile m(cfg);
  const double l1 = cfg.admissibility().l1_phi;
  std::vector<double> xs(samples);
  std::vector<double> values(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = -extent + 2.0 * extent * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  parallel_for(samples, [&](std::size_t i) { values[i] = m(xs[i]); });
  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v));
  for (double x : {-1.0, 1.0}) sup = std::max(sup, std::abs(m(x)));
  const double k0 = m(0.0);

  ExperimentReport r;
  r.experiment_id = "multiplier";
  r.config_digest = config_digest(canonical_config(r.experiment_id, cfg.weight(), cfg.scale(), {},
                                                   std::to_string(samples) + "|" + fmt(extent, 17)));
  r.set_summary("khat_at_0", k0);
  r.set_summary("sup_abs_khat", sup);
  r.set_summary("l1_phi", l1);
  r.set_summary("samples", static_cast<double>(samples));
  bool ok = std::abs(k0 - 1.0) <= 1e-8 && sup <= l1 + 1e-9;
  if (std::abs(k0 - 1.0) > 1e-8) r.notes.push_back("K^(0) differs from 1 by " + fmt(std::abs(k0 - 1.0)));
  if (sup > l1 + 1e-9) r.notes.push_back("sup |K^| exceeds ||phi||_1");
  if (m.closed_form()) {
    const MultiplierSelfTest t = multiplier_self_test(cfg.weight());
    r.set_summary("closed_form_max_discrepancy", t.max_discrepancy);
    r.set_summary("closed_form_points", static_cast<double>(t.points));
    if (!t.passed) r.notes.push_back("closed form disagrees with quadrature at x = " + fmt(t.worst_x));
    ok = ok && t.passed;
  } else {
    r.notes.push_back("no closed form for this weight and scale; values come from quadrature");
  }
  r.bound_constant = sup;
  r.passed = ok;
  return r;
}

ExperimentReport exact_reproduction(const WeightSpec& w, const ScaleSpec& a, double bandwidth, const Grid& grid) {
  const SampledSignal f = make_bandlimited(bandwidth, grid);
  const std::vector<double> factors{4.0, 2.0, 1.0, 0.5, 0.25};
  std::vector<double> eps(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) eps[k] = factors[k] / bandwidth;
  const OperatorConfig base(w, a, eps.front());
  const Spectrum spectrum = forward_fourier(f);
  const double l2f = lp_norm(f, 2.0);
  std::vector<double> rel(eps.size());
  parallel_for(eps.size(), [&](std::size_t k) {
    const PartialResult F = partial_hausdorff_spectral(base.with_epsilon(eps[k]), spectrum, f);
    rel[k] = lp_norm(F.signal.minus(f), 2.0) / l2f;
  });
  ExperimentReport r;
  r.experiment_id = "exact-reproduction";
  r.config_digest = config_digest(canonical_config(r.experiment_id, w, a, eps,
                                                   fmt(bandwidth, 17) + "|" + signal_fingerprint(f)));
  r.epsilon_grid = eps;
  r.set_metric("relative_l2_error", rel);
  r.set_metric("eps_times_bandwidth", factors);
  r.set_summary("bandwidth", bandwidth);
  bool inside = true;
  double worst_inside = 0.0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k] <= 1.0) {
      worst_inside = std::max(worst_inside, rel[k]);
      inside = inside && rel[k] <= 1e-6;
    }
  }
  const bool outside = rel.front() > 1e-3;
  r.set_summary("max_error_eps_le_1_over_b", worst_inside);
  r.set_summary("error_at_4_over_b", rel.front());
  r.passed = inside && outside;
  if (!inside) r.notes.push_back("F_eps does not reproduce f for eps <= 1/B");
  if (!outside) r.notes.push_back("no visible error at eps = 4/B");
  return r;
}

ExperimentReport path_consistency(const OperatorConfig& cfg, const SampledSignal& f, std::size_t points,
                                  double tolerance) {
  if (points == 0) throw InvalidInput("need at least one direct evaluation point");
  const PartialResult spectral = partial_hausdorff_spectral(cfg, f);
  const PartialResult conv = partial_hausdorff_convolution(cfg, f);
  const double conv_rel = lp_norm(spectral.signal.minus(conv.signal), 2.0) / lp_norm(spectral.signal, 2.0);

  // Direct points: evenly spread over the middle half of the range where |f| >= 1e-3 max |f|.
  double peak = 0.0;
  for (double v : f.values()) peak = std::max(peak, std::abs(v));
  std::size_t first = 0;
  std::size_t last = f.size() - 1;
  while (first < last && std::abs(f[first]) < 1e-3 * peak) ++first;
  while (last > first && std::abs(f[last]) < 1e-3 * peak) --last;
  const double span = static_cast<double>(last - first);
  std::vector<std::size_t> idx(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double u = points > 1 ? static_cast<double>(k) / static_cast<double>(points - 1) : 0.5;
    idx[k] = first + static_cast<std::size_t>(std::llround((0.25 + 0.5 * u) * span));
  }
  std::vector<double> xs(points);
  std::vector<double> direct(points);
  std::vector<double> spec(points);
  parallel_for(points, [&](std::size_t k) {
    xs[k] = f.x(idx[k]);
    direct[k] = partial_hausdorff_direct(cfg, f, xs[k]);
    spec[k] = spectral.signal[idx[k]];
  });
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < points; ++k) scale = std::max(scale, std::abs(spec[k]));
  std::vector<double> err(points);
  for (std::size_t k = 0; k < points; ++k) {
    err[k] = scale > 0.0 ? std::abs(direct[k] - spec[k]) / scale : std::abs(direct[k]);
    worst = std::max(worst, err[k]);
  }
  ExperimentReport r;
  r.experiment_id = "path-consistency";
  r.config_digest = config_digest(canonical_config(r.experiment_id, cfg.weight(), cfg.scale(), {cfg.epsilon()},
                                                   signal_fingerprint(f) + "|" + std::to_string(points)));
  r.set_metric("x", xs);
  r.set_metric("spectral", spec);
  r.set_metric("direct", direct);
  r.set_metric("relative_error", err);
  r.set_summary("epsilon", cfg.epsilon());
  r.set_summary("spectral_vs_convolution", conv_rel);
  r.set_summary("spectral_vs_direct", worst);
  r.set_summary("convolution_truncation_radius", conv.truncation_radius);
  r.set_summary("convolution_tail_bound", conv.tail_bound);
  r.passed = conv_rel <= tolerance && worst <= tolerance;
  r.notes.push_back("series are indexed by the direct evaluation points in metric 'x'");
  if (conv_rel > tolerance) r.notes.push_back("convolution path differs from the spectral path by " + fmt(conv_rel));
  if (worst > tolerance) r.notes.push_back("direct quadrature differs from the spectral path by " + fmt(worst));
  for (const auto& wmsg : spectral.warnings) r.notes.push_back("spectral: " + wmsg);
  for (const auto& wmsg : conv.warnings) r.notes.push_back("convolution: " + wmsg);
  return r;
}

ExperimentReport l2_bounds(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f,
                           const std::vector<double>& eps_grid, std::size_t stride) {
  require_decreasing(eps_grid);
  const OperatorConfig base(w, a, eps_grid.front());
  const double l1 = base.admissibility().l1_phi;
  const Spectrum spectrum = forward_fourier(f);
  const double l2f = lp_norm(f, 2.0);
  std::vector<double> ratio(eps_grid.size());
  std::vector<double> excess(eps_grid.size());
  parallel_for(eps_grid.size(), [&](std::size_t k) {
    const double l2F = lp_norm(partial_hausdorff_spectral(base.with_epsilon(eps_grid[k]), spectrum, f).signal, 2.0);
    ratio[k] = l2f > 0.0 ? l2F / l2f : 0.0;
    excess[k] = l2F - l1 * l2f;
  });
  const L2BoundCheck h = l2_bound_check(w, a, f, 2e-3, stride);
  ExperimentReport r;
  r.experiment_id = "l2-bounds";
  r.config_digest = config_digest(canonical_config(r.experiment_id, w, a, eps_grid,
                                                   signal_fingerprint(f) + "|" + std::to_string(stride)));
  r.epsilon_grid = eps_grid;
  r.set_metric("partial_l2_ratio", ratio);
  r.set_metric("partial_l2_excess", excess);
  r.set_summary("l1_phi", l1);
  r.set_summary("hausdorff_l2_norm", h.norm_hf);
  r.set_summary("signal_l2_norm", h.norm_f);
  r.set_summary("hausdorff_l2_constant", h.constant);
  bool partial_ok = true;
  for (double e : excess) partial_ok = partial_ok && e <= 1e-8;
  r.passed = partial_ok && h.passed;
  if (!partial_ok) r.notes.push_back("||F_eps||_2 exceeds ||phi||_1 ||f||_2");
  if (!h.passed) r.notes.push_back("||H f||_2 exceeds its bound");
  return r;
}

ExperimentReport adjoint_hardy_identity(const std::function<double(double)>& f, const Grid& grid,
                                        const std::vector<double>& points, double tolerance) {
  const WeightSpec w = WeightSpec::adjoint_hardy();
  const ScaleSpec a = ScaleSpec::reciprocal();
  const SampledSignal sampled = SampledSignal::from_function(grid, f);
  std::vector<double> op(points.size());
  std::vector<double> oracle(points.size());
  std::vector<double> err(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    const double x = points[k];
    op[k] = apply_hausdorff(w, a, sampled, x);
    const double ax = std::abs(x);
    const auto g = [&](double t) { return t == 0.0 ? 0.0 : f(t) / std::abs(t); };
    double sum = 0.0;
    if (grid.last() > ax) sum += quad::integrate(quad::Integrand::on(g, ax, grid.last(), {0.0}), 1e-10, 1e-14).value;
    if (grid.x0 < -ax) sum += quad::integrate(quad::Integrand::on(g, grid.x0, -ax, {0.0}), 1e-10, 1e-14).value;
    oracle[k] = 0.5 * sum;
    err[k] = std::abs(op[k] - oracle[k]);
  });
  ExperimentReport r;
  r.experiment_id = "adjoint-hardy-identity";
  r.config_digest = config_digest(r.experiment_id + "|" + grid_string(points) + "|" + fmt(grid.x0, 17) + "," +
                                  fmt(grid.dx, 17) + "," + std::to_string(grid.n));
  r.set_metric("x", points);
  r.set_metric("operator", op);
  r.set_metric("closed_form", oracle);
  r.set_metric("abs_error", err);
  const double worst = err.empty() ? 0.0 : *std::max_element(err.begin(), err.end());
  r.bound_constant = worst;
  r.set_summary("max_abs_error", worst);
  r.set_summary("tolerance", tolerance);
  r.passed = worst <= tolerance;
  r.notes.push_back("no epsilon dependence: series are indexed by the sample points in metric 'x'");
  return r;
}

}  // namespace haus
