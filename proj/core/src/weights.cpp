#include "haus/weights.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "haus/error.hpp"
#include "haus/io.hpp"

namespace haus {

namespace {

constexpr double kAdmRel = 1e-10;
constexpr double kAdmAbs = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

}  // namespace

WeightSpec WeightSpec::power_tail(double p) {
  require_finite(p, "power-tail p");
  if (!(p > 1.0)) throw DomainError("power-tail weight requires p > 1 (got p = " + fmt(p) + ")");
  return {WeightFamily::PowerTail, p};
}

WeightSpec WeightSpec::power_bump(double p) {
  require_finite(p, "power-bump p");
  if (!(p < 0.5)) throw DomainError("power-bump weight requires p < 1/2 (got p = " + fmt(p) + ")");
  return {WeightFamily::PowerBump, p};
}

WeightSpec WeightSpec::adjoint_hardy() { return {WeightFamily::AdjointHardy, 0.0}; }

WeightSpec WeightSpec::riemann_liouville(double alpha) {
  require_finite(alpha, "riemann-liouville alpha");
  if (!(alpha > 0.0)) {
    throw DomainError("riemann-liouville weight requires alpha > 0 (got alpha = " + fmt(alpha) + ")");
  }
  return {WeightFamily::RiemannLiouville, alpha};
}

WeightSpec WeightSpec::tabulated(std::vector<double> t, std::vector<double> phi) {
  if (t.size() != phi.size()) throw InvalidInput("weight table columns differ in length");
  if (t.size() < 2) throw InvalidInput("weight table needs at least two rows");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require_finite(t[i], "weight table abscissa");
    require_finite(phi[i], "weight table value");
    if (i > 0 && !(t[i] > t[i - 1])) throw InvalidInput("weight table abscissae must be strictly increasing");
  }
  WeightSpec w(WeightFamily::Tabulated, 0.0);
  w.table_t_ = std::move(t);
  w.table_phi_ = std::move(phi);
  return w;
}

std::string WeightSpec::family_name() const {
  switch (family_) {
    case WeightFamily::PowerTail: return "power-tail";
    case WeightFamily::PowerBump: return "power-bump";
    case WeightFamily::AdjointHardy: return "adjoint-hardy";
    case WeightFamily::RiemannLiouville: return "riemann-liouville";
    case WeightFamily::Tabulated: return "tabulated";
  }
  return "unknown";
}

std::string WeightSpec::label() const {
  switch (family_) {
    case WeightFamily::PowerTail:
    case WeightFamily::PowerBump: return family_name() + "(p=" + fmt(parameter_) + ")";
    case WeightFamily::RiemannLiouville: return family_name() + "(alpha=" + fmt(parameter_) + ")";
    case WeightFamily::AdjointHardy: return family_name();
    case WeightFamily::Tabulated: return family_name() + "(" + std::to_string(table_t_.size()) + " rows)";
  }
  return family_name();
}

double WeightSpec::value_or_zero(double t) const noexcept {
  const double at = std::abs(t);
  switch (family_) {
    case WeightFamily::PowerTail:
      return at > 1.0 ? 0.5 * (parameter_ - 1.0) * std::pow(at, -parameter_) : 0.0;
    case WeightFamily::PowerBump:
    case WeightFamily::AdjointHardy:
      return (at > 0.0 && at < 1.0) ? 0.5 * (1.0 - parameter_) * std::pow(at, -parameter_) : 0.0;
    case WeightFamily::RiemannLiouville:
      return (at > 0.0 && at < 1.0) ? 0.5 * (1.0 + parameter_) * std::pow(1.0 - at, parameter_) : 0.0;
    case WeightFamily::Tabulated: {
      if (!(t >= table_t_.front() && t <= table_t_.back())) return 0.0;
      const auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
      if (it == table_t_.end()) return table_phi_.back();
      const std::size_t k = static_cast<std::size_t>(it - table_t_.begin());
      const double t0 = table_t_[k - 1];
      const double t1 = table_t_[k];
      const double w = (t - t0) / (t1 - t0);
      return (1.0 - w) * table_phi_[k - 1] + w * table_phi_[k];
    }
  }
  return 0.0;
}

double WeightSpec::operator()(double t) const {
  if (!std::isfinite(t)) throw DomainError("weight argument must be finite");
  if (family_ == WeightFamily::Tabulated && (t < table_t_.front() || t > table_t_.back())) {
    throw OutOfRange("t = " + fmt(t) + " lies outside the weight table [" + fmt(table_t_.front()) + ", " +
                     fmt(table_t_.back()) + "]");
  }
  return value_or_zero(t);
}

double WeightSpec::folded(double t) const noexcept { return value_or_zero(t) + value_or_zero(-t); }

double WeightSpec::origin_limit() const noexcept {
  switch (family_) {
    case WeightFamily::PowerTail: return 0.0;
    case WeightFamily::PowerBump:
    case WeightFamily::AdjointHardy:
      if (parameter_ > 0.0) return std::numeric_limits<double>::infinity();
      return parameter_ == 0.0 ? 0.5 : 0.0;
    case WeightFamily::RiemannLiouville: return 0.5 * (1.0 + parameter_);
    case WeightFamily::Tabulated: return value_or_zero(0.0);
  }
  return 0.0;
}

std::vector<quad::Interval> WeightSpec::support() const {
  switch (family_) {
    case WeightFamily::PowerTail: return {{-quad::kInf, -1.0}, {1.0, quad::kInf}};
    case WeightFamily::PowerBump:
    case WeightFamily::AdjointHardy:
    case WeightFamily::RiemannLiouville: return {{-1.0, 0.0}, {0.0, 1.0}};
    case WeightFamily::Tabulated: {
      const double lo = table_t_.front();
      const double hi = table_t_.back();
      if (lo < 0.0 && hi > 0.0) return {{lo, 0.0}, {0.0, hi}};
      return {{lo, hi}};
    }
  }
  return {};
}

std::vector<quad::Interval> WeightSpec::folded_support() const {
  std::vector<quad::Interval> out;
  for (const quad::Interval& iv : support()) {
    if (iv.lo >= 0.0) {
      out.push_back(iv);
    } else if (iv.hi <= 0.0) {
      out.push_back({-iv.hi, -iv.lo});
    } else {
      out.push_back({0.0, std::max(-iv.lo, iv.hi)});
    }
  }
  std::sort(out.begin(), out.end(), [](const quad::Interval& a, const quad::Interval& b) { return a.lo < b.lo; });
  std::vector<quad::Interval> merged;
  for (const quad::Interval& iv : out) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::vector<double> WeightSpec::singular_points() const {
  if (family_ != WeightFamily::Tabulated) return {0.0};
  std::vector<double> pts(table_t_);
  pts.push_back(0.0);
  for (double t : table_t_) pts.push_back(-t);
  return pts;
}

double eval_weight(const WeightSpec& w, double t) { return w(t); }

ScaleSpec ScaleSpec::reciprocal() { return ScaleSpec(); }

ScaleSpec ScaleSpec::custom(std::function<double(double)> a, std::function<double(double)> inverse_abs,
                            std::string label) {
  if (!a) throw InvalidInput("custom scale map needs an evaluator");
  ScaleSpec s;
  s.reciprocal_ = false;
  s.a_ = std::move(a);
  s.inverse_abs_ = std::move(inverse_abs);
  s.label_ = std::move(label);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = -40; k <= 40; ++k) {
    const double t = std::exp2(0.25 * k);
    const double plus = s.a_(t);
    const double minus = s.a_(-t);
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw InvalidInput("custom scale map is not finite at t = " + fmt(t));
    }
    if (std::abs(plus + minus) > 1e-12 * std::max(1.0, std::abs(plus))) {
      throw InvalidInput("custom scale map is not odd at t = " + fmt(t));
    }
    const double mag = std::abs(plus);
    if (!(mag > 0.0)) throw InvalidInput("custom scale map vanishes at t = " + fmt(t));
    if (!(mag < previous)) throw InvalidInput("|a| is not strictly decreasing near t = " + fmt(t));
    previous = mag;
    if (s.inverse_abs_) {
      const double back = s.inverse_abs_(mag);
      if (!(std::abs(back - t) <= 1e-8 * t)) {
        throw InvalidInput("supplied inverse of |a| is inconsistent at t = " + fmt(t));
      }
    }
  }
  return s;
}

double ScaleSpec::operator()(double t) const {
  if (reciprocal_) return t == 0.0 ? 0.0 : 1.0 / t;
  return a_(t);
}

double ScaleSpec::abs_inverse(double y) const {
  y = std::abs(y);
  if (y == 0.0) return quad::kInf;
  if (reciprocal_) return 1.0 / y;
  if (!inverse_abs_) throw Unsupported("scale map '" + label_ + "' has no inverse of |a|");
  return inverse_abs_(y);
}

double ScaleSpec::abs_inverse_derivative(double y) const {
  y = std::abs(y);
  if (reciprocal_) return -1.0 / (y * y);
  const double h = 1e-5 * y;
  return (abs_inverse(y + h) - abs_inverse(y - h)) / (2.0 * h);
}

AdmissibilityReport check_admissibility(const WeightSpec& w, const ScaleSpec& a) {
  AdmissibilityReport r;
  const auto support = w.support();
  const auto singular = w.singular_points();
  auto run = [&](std::function<double(double)> fn) {
    return quad::integrate({std::move(fn), support, singular}, kAdmRel, kAdmAbs).value;
  };

  r.integral_phi = run([&](double t) { return w.value_or_zero(t); });
  r.l1_phi = run([&](double t) { return std::abs(w.value_or_zero(t)); });

  try {
    r.l1_phi_sqrt_a = run([&](double t) {
      const double v = std::abs(w.value_or_zero(t));
      return v == 0.0 ? 0.0 : v * std::sqrt(std::abs(a(t)));
    });
  } catch (const Divergence&) {
    r.l1_phi_sqrt_a = std::numeric_limits<double>::infinity();
    r.sqrt_a_diverged = true;
    r.notes.push_back("integral of |phi| |a|^(1/2) diverges");
  }

  try {
    r.l1_phi_a = run([&](double t) {
      const double v = std::abs(w.value_or_zero(t));
      return v == 0.0 ? 0.0 : v * std::abs(a(t));
    });
    r.integral_phi_a = run([&](double t) {
      const double v = w.value_or_zero(t);
      return v == 0.0 ? 0.0 : v * std::abs(a(t));
    });
  } catch (const Divergence&) {
    r.l1_phi_a.reset();
    r.integral_phi_a.reset();
    if (!r.sqrt_a_diverged) {
      r.notes.push_back(
          "integral of phi |a| diverges while phi |a|^(1/2) is integrable; the kernel has no finite value at s = 0");
    }
  }

  const bool normalized = std::abs(r.integral_phi - 1.0) <= 1e-8;
  if (!normalized) r.notes.push_back("integral of phi is " + fmt(r.integral_phi) + ", not 1");
  if (r.l1_phi > r.integral_phi * (1.0 + 1e-12) + 1e-12) r.notes.push_back("phi takes negative values");
  r.passed = normalized && !r.sqrt_a_diverged && std::isfinite(r.l1_phi_sqrt_a);
  return r;
}

double scale_superlevel_measure(const WeightSpec& w, const ScaleSpec& a, double x) {
  const double r = a.abs_inverse(x);
  std::vector<quad::Interval> clipped;
  for (const quad::Interval& iv : w.support()) {
    const double lo = std::max(iv.lo, -r);
    const double hi = std::min(iv.hi, r);
    if (lo < hi) clipped.push_back({lo, hi});
  }
  if (clipped.empty()) return 0.0;
  return quad::integrate({[&](double t) { return w.value_or_zero(t); }, clipped, w.singular_points()}, 1e-12, 1e-14)
      .value;
}

WeightSpec weight_from_json(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed weight JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw InvalidInput("weight JSON must be an object with a string \"family\"");
  }
  auto number = [&](const char* key) {
    if (!j.contains(key)) throw InvalidInput(std::string("weight JSON is missing \"") + key + "\"");
    if (!j[key].is_number()) throw InvalidInput(std::string("weight JSON field \"") + key + "\" must be a number");
    return j[key].get<double>();
  };
  const std::string family = j["family"].get<std::string>();
  if (family == "power-tail") return WeightSpec::power_tail(number("p"));
  if (family == "power-bump") return WeightSpec::power_bump(number("p"));
  if (family == "adjoint-hardy") return WeightSpec::adjoint_hardy();
  if (family == "riemann-liouville") return WeightSpec::riemann_liouville(number("alpha"));
  if (family == "tabulated") {
    if (!j.contains("table") || !j["table"].is_string()) throw InvalidInput("tabulated weight needs a \"table\" path");
    std::filesystem::path path(j["table"].get<std::string>());
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    const CsvTable table = read_csv(path.string());
    return WeightSpec::tabulated(table.column("t"), table.column("phi"));
  }
  throw InvalidInput("unknown weight family \"" + family + "\"");
}

std::string admissibility_to_json(const AdmissibilityReport& r, const WeightSpec& w, const ScaleSpec& a) {
  using nlohmann::ordered_json;
  const auto finite_or_null = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  const auto optional_or_null = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json j;
  j["weight"] = ordered_json::parse(weight_to_json(w));
  j["scale"] = a.label();
  j["integral_phi"] = r.integral_phi;
  j["l1_phi"] = r.l1_phi;
  j["l1_phi_sqrt_a"] = finite_or_null(r.l1_phi_sqrt_a);
  j["sqrt_a_diverged"] = r.sqrt_a_diverged;
  j["l1_phi_a"] = optional_or_null(r.l1_phi_a);
  j["integral_phi_a"] = optional_or_null(r.integral_phi_a);
  j["passed"] = r.passed;
  j["notes"] = r.notes;
  return j.dump(2);
}

std::string weight_to_json(const WeightSpec& w) {
  nlohmann::ordered_json j;
  j["family"] = w.family_name();
  switch (w.family()) {
    case WeightFamily::PowerTail:
    case WeightFamily::PowerBump: j["p"] = w.parameter(); break;
    case WeightFamily::RiemannLiouville: j["alpha"] = w.parameter(); break;
    case WeightFamily::AdjointHardy: break;
    case WeightFamily::Tabulated: j["rows"] = w.table_t().size(); break;
  }
  return j.dump();
}

}  // namespace haus
