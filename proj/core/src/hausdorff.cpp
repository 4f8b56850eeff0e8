#include "haus/hausdorff.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "haus/error.hpp"
#include "haus/parallel.hpp"

namespace haus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kKernelRel = 1e-10;
constexpr double kKernelAbs = 1e-13;
constexpr double kLeakageWarn = 1e-6;
// Asymptotic tails start where u * s >= kTailProduct; the dropped term is ~ 4! / (u s)^4.
constexpr double kTailProduct = 200.0;

// \int_U^inf g(u) sin(s u) du for g smooth and algebraically decaying on [U, inf), by
// repeated integration by parts; derivatives from five-point differences.
double sine_tail(const std::function<double(double)>& g, double s, double U) {
  const double h = 0.02 * U;
  const double f0 = g(U);
  const double fp1 = g(U + h);
  const double fm1 = g(U - h);
  const double fp2 = g(U + 2.0 * h);
  const double fm2 = g(U - 2.0 * h);
  const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
  const double d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
  const double c = std::cos(s * U);
  const double sn = std::sin(s * U);
  return f0 * c / s - d1 * sn / (s * s) - d2 * c / (s * s * s) + d3 * sn / (s * s * s * s);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double sine_integral(double x) { return x == 0.0 ? 0.0 : gsl_sf_Si(x); }

// Range of |a| over a t-interval of (0, inf); |a| is decreasing, so the ends swap.
quad::Interval u_range(const ScaleSpec& a, const quad::Interval& t) {
  if (a.is_reciprocal()) {
    return {std::isinf(t.hi) ? 0.0 : 1.0 / t.hi, t.lo == 0.0 ? quad::kInf : 1.0 / t.lo};
  }
  double lo = std::abs(a(std::isinf(t.hi) ? 1e300 : t.hi));
  double hi = std::abs(a(t.lo == 0.0 ? 1e-300 : t.lo));
  if (lo < 1e-200) lo = 0.0;
  if (hi > 1e200) hi = quad::kInf;
  return {lo, hi};
}

// Interval in x covered by the linear interpolant's nonzero part.
std::pair<std::size_t, std::size_t> interpolant_hull(const SampledSignal& f) {
  auto [first, last] = f.nonzero_hull();
  if (first > 0) --first;
  if (last + 1 < f.size()) ++last;
  return {first, last};
}

}  // namespace

OperatorConfig::OperatorConfig(WeightSpec weight, ScaleSpec scale, double epsilon)
    : OperatorConfig(weight, scale, epsilon, nullptr) {}

OperatorConfig::OperatorConfig(WeightSpec weight, ScaleSpec scale, double epsilon,
                               std::shared_ptr<const AdmissibilityReport> report)
    : weight_(std::move(weight)), scale_(std::move(scale)), epsilon_(epsilon), admissibility_(std::move(report)) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) throw DomainError("epsilon must be positive and finite");
  if (!admissibility_) {
    admissibility_ = std::make_shared<const AdmissibilityReport>(check_admissibility(weight_, scale_));
  }
  if (!admissibility_->passed) {
    std::string why = "weight " + weight_.label() + " is not admissible";
    for (const std::string& n : admissibility_->notes) why += "; " + n;
    throw DomainError(why);
  }
}

OperatorConfig OperatorConfig::with_epsilon(double epsilon) const {
  return OperatorConfig(weight_, scale_, epsilon, admissibility_);
}

std::optional<double> closed_form_multiplier(const WeightSpec& w, double x) {
  const double ax = std::abs(x);
  const double p = w.parameter();
  switch (w.family()) {
    case WeightFamily::PowerTail: return ax >= 1.0 ? 0.0 : 1.0 - std::pow(ax, p - 1.0);
    case WeightFamily::PowerBump:
    case WeightFamily::AdjointHardy: return ax <= 1.0 ? 1.0 : std::pow(ax, p - 1.0);
    case WeightFamily::RiemannLiouville: return ax <= 1.0 ? 1.0 : 1.0 - std::pow(1.0 - 1.0 / ax, 1.0 + p);
    case WeightFamily::Tabulated: return std::nullopt;
  }
  return std::nullopt;
}

MultiplierProfile::MultiplierProfile(WeightSpec weight, ScaleSpec scale)
    : weight_(std::move(weight)), scale_(std::move(scale)), closed_form_(scale_.is_reciprocal() && weight_.analytic()) {}

double MultiplierProfile::operator()(double x) const {
  if (closed_form_) return *closed_form_multiplier(weight_, x);
  return by_quadrature(x);
}

double MultiplierProfile::by_quadrature(double x) const { return scale_superlevel_measure(weight_, scale_, x); }

MultiplierSelfTest multiplier_self_test(const WeightSpec& w, std::size_t points) {
  MultiplierSelfTest r;
  r.points = points;
  const ScaleSpec a = ScaleSpec::reciprocal();
  for (std::size_t i = 0; i < points; ++i) {
    const double x = points == 1 ? 0.0 : -4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto closed = closed_form_multiplier(w, x);
    if (!closed) return r;
    const double d = std::abs(*closed - scale_superlevel_measure(w, a, x));
    if (d > r.max_discrepancy) {
      r.max_discrepancy = d;
      r.worst_x = x;
    }
  }
  r.passed = r.max_discrepancy <= 1e-6;
  return r;
}

double multiplier_eval(const OperatorConfig& cfg, double x) { return MultiplierProfile(cfg)(x); }

UForm::UForm(const WeightSpec& w, const ScaleSpec& a) : weight_(w), scale_(a) {
  if (!a.has_inverse()) throw Unsupported("scale map '" + a.label() + "' has no inverse of |a|");
  for (const quad::Interval& t : w.folded_support()) {
    const quad::Interval u = u_range(a, t);
    if (u.lo < u.hi) support_.push_back(u);
  }
  std::sort(support_.begin(), support_.end(), [](const quad::Interval& x, const quad::Interval& y) {
    return x.lo < y.lo;
  });
}

double UForm::psi(double u) const {
  if (!(u > 0.0)) return 0.0;
  if (scale_.is_reciprocal()) {
    const double t = 1.0 / u;
    return weight_.folded(t) / (u * u);
  }
  const double t = scale_.abs_inverse(u);
  return weight_.folded(t) * std::abs(scale_.abs_inverse_derivative(u));
}

bool UForm::smooth_tail() const noexcept { return weight_.analytic() && scale_.is_reciprocal(); }

double UForm::mass(double lo, double hi) const {
  std::vector<quad::Interval> pieces;
  for (const quad::Interval& iv : support_) {
    const double a = std::max(lo, iv.lo);
    const double b = std::min(hi, iv.hi);
    if (a < b) pieces.push_back({a, b});
  }
  if (pieces.empty()) return 0.0;
  return quad::integrate({[this](double u) { return psi(u); }, pieces, {}}, 1e-11, 1e-14).value;
}

KernelProfile::KernelProfile(const OperatorConfig& cfg)
    : uform_(std::make_shared<const UForm>(cfg.weight(), cfg.scale())),
      epsilon_(cfg.epsilon()),
      l1_phi_(cfg.admissibility().l1_phi) {
  if (cfg.admissibility().integral_phi_a) origin_ = *cfg.admissibility().integral_phi_a / kPi;
}

double KernelProfile::unscaled(double s) const {
  const double as = std::abs(s);
  if (as == 0.0) {
    if (origin_) return *origin_;
    throw SingularPoint("kernel has no finite value at s = 0: the integral of phi |a| diverges");
  }
  if (!std::isfinite(as)) throw DomainError("kernel argument must be finite");
  const auto amplitude = [this](double u) { return uform_->psi(u); };
  double sum = 0.0;
  for (const quad::Interval& iv : uform_->support()) {
    if (std::isinf(iv.hi) && uform_->smooth_tail()) {
      const double cut = std::max(2.0 * iv.lo, kTailProduct / as);
      sum += quad::integrate_sine(amplitude, as, iv.lo, cut, kKernelRel, kKernelAbs).value;
      sum += sine_tail(amplitude, as, cut);
    } else {
      sum += quad::integrate_sine(amplitude, as, iv.lo, iv.hi, kKernelRel, kKernelAbs).value;
    }
  }
  return sum / (kPi * as);
}

double KernelProfile::scaled(double s) const {
  if (s == 0.0) return unscaled(0.0) / epsilon_;
  return unscaled(s / epsilon_) / epsilon_;
}

double kernel_eval(const OperatorConfig& cfg, double s, bool scaled) { return KernelProfile(cfg)(s, scaled); }

namespace {

// \int phi(x/u) f(u) / |u| du: the reciprocal-scale operator after u = x / t.
// Cancellation (odd f over a symmetric range) leaves only roundoff, which grows with the
// number of node panels, so the absolute floor follows the width of the range.
double roundoff_floor(double scale, const std::vector<quad::Interval>& support) {
  double width = 0.0;
  for (const quad::Interval& iv : support) width += iv.hi - iv.lo;
  return 1e-13 * std::max(scale, 1e-300) * std::max(1.0, width);
}

double apply_reciprocal(const WeightSpec& w, const SampledSignal& f, double x) {
  const auto [first, last] = interpolant_hull(f);
  const double lo = f.x(first);
  const double hi = f.x(last);
  const double ax = std::abs(x);
  // phi(x/u) vanishes for |u| > |x| (power-tail) or |u| < |x| (weights supported in |t| < 1).
  std::vector<quad::Interval> support;
  switch (w.family()) {
    case WeightFamily::PowerTail:
      if (std::max(lo, -ax) < std::min(hi, ax)) support.push_back({std::max(lo, -ax), std::min(hi, ax)});
      break;
    case WeightFamily::PowerBump:
    case WeightFamily::AdjointHardy:
    case WeightFamily::RiemannLiouville:
      if (lo < -ax) support.push_back({lo, std::min(hi, -ax)});
      if (hi > ax) support.push_back({std::max(lo, ax), hi});
      break;
    case WeightFamily::Tabulated: support.push_back({lo, hi}); break;
  }
  if (support.empty()) return 0.0;
  std::vector<double> cuts{0.0, x, -x};
  for (std::size_t i = first; i <= last; ++i) cuts.push_back(f.x(i));
  double scale = 0.0;
  for (double v : f.values()) scale = std::max(scale, std::abs(v));
  const auto integrand = [&](double u) {
    const double fu = f.interpolate(u);
    if (fu == 0.0) return 0.0;
    return w.value_or_zero(x / u) * fu / std::abs(u);
  };
  return quad::integrate({integrand, support, cuts}, 1e-10, roundoff_floor(scale, support)).value;
}

}  // namespace

double apply_hausdorff(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f, double x) {
  if (!std::isfinite(x)) throw DomainError("evaluation point must be finite");
  if (x == 0.0) {
    const double f0 = f.interpolate(0.0);
    std::optional<double> mass;
    try {
      mass = quad::integrate({[&](double t) {
                                const double v = w.value_or_zero(t);
                                return v == 0.0 ? 0.0 : v * std::abs(a(t));
                              },
                              w.support(), w.singular_points()},
                             1e-10, 1e-13)
                 .value;
    } catch (const Divergence&) {
    }
    if (mass) return f0 * *mass;
    const double limit = w.origin_limit();
    double scale = 0.0;
    for (double v : f.values()) scale = std::max(scale, std::abs(v));
    if (!a.is_reciprocal() || !std::isfinite(limit) || std::abs(f0) > 1e-12 * scale) {
      throw SingularPoint("H f(0) diverges for this weight unless f vanishes at 0");
    }
    if (limit == 0.0) return 0.0;
    // x -> 0 limit of \int phi(x/u) f(u)/|u| du.
    const auto [first, last] = interpolant_hull(f);
    std::vector<double> cuts{0.0};
    for (std::size_t i = first; i <= last; ++i) cuts.push_back(f.x(i));
    const double integral =
        quad::integrate({[&](double u) { return u == 0.0 ? 0.0 : f.interpolate(u) / std::abs(u); },
                         {{f.x(first), f.x(last)}},
                         cuts},
                        1e-10, roundoff_floor(scale, {{f.x(first), f.x(last)}}))
            .value;
    return limit * integral;
  }
  if (a.is_reciprocal()) return apply_reciprocal(w, f, x);
  double scale = 0.0;
  for (double v : f.values()) scale = std::max(scale, std::abs(v));
  return quad::integrate({[&](double t) {
                            const double v = w.value_or_zero(t);
                            if (v == 0.0) return 0.0;
                            const double at = a(t);
                            return v * std::abs(at) * f.interpolate(at * x);
                          },
                          w.support(), w.singular_points()},
                         1e-9, 1e-15 * std::max(scale, 1e-300))
      .value;
}

SampledSignal apply_hausdorff(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f, std::size_t stride) {
  if (stride == 0) throw DomainError("stride must be positive");
  const std::size_t m = (f.size() + stride - 1) / stride;
  if (m < 2) throw InvalidInput("strided output has fewer than two points");
  std::vector<double> out(m);
  parallel_for(m, [&](std::size_t k) { out[k] = apply_hausdorff(w, a, f, f.x(k * stride)); });
  return SampledSignal(f.x0(), f.dx() * static_cast<double>(stride), std::move(out));
}

L2BoundCheck l2_bound_check(const WeightSpec& w, const ScaleSpec& a, const SampledSignal& f, double slack,
                            std::size_t stride) {
  L2BoundCheck r;
  r.slack = slack;
  r.constant = check_admissibility(w, a).l1_phi_sqrt_a;
  r.norm_f = lp_norm(f, 2.0);
  if (stride == 0) throw DomainError("stride must be positive");
  const std::size_t m = (f.size() + stride - 1) / stride;
  std::vector<double> hf(m, 0.0);
  // A singular value at the origin is one sample of a square-integrable function; drop it.
  parallel_for(m, [&](std::size_t k) {
    try {
      hf[k] = apply_hausdorff(w, a, f, f.x(k * stride));
    } catch (const SingularPoint&) {
      if (f.x(k * stride) != 0.0) throw;
    }
  });
  r.norm_hf = lp_norm(SampledSignal(f.x0(), f.dx() * static_cast<double>(stride), std::move(hf)), 2.0);
  r.passed = r.norm_hf <= r.constant * r.norm_f + slack;
  return r;
}

PartialResult partial_hausdorff_spectral(const OperatorConfig& cfg, const Spectrum& spectrum, const SampledSignal& f) {
  const MultiplierProfile m(cfg);
  const double eps = cfg.epsilon();
  SampledSignal out = apply_multiplier(spectrum, f.size(), [&](double xi) { return m(eps * xi); });
  PartialResult r{std::move(out), 0.0, {}, 0.0, 0.0};
  r.leakage = std::max(spectral_leakage(f), spectral_leakage(r.signal));
  if (r.leakage > kLeakageWarn) {
    r.warnings.push_back("grid too small: spectral leakage " + fmt(r.leakage) + " exceeds 1e-6");
  }
  return r;
}

PartialResult partial_hausdorff_spectral(const OperatorConfig& cfg, const SampledSignal& f) {
  return partial_hausdorff_spectral(cfg, forward_fourier(f), f);
}

PartialResult partial_hausdorff_convolution(const OperatorConfig& cfg, const SampledSignal& f) {
  const std::size_t n = f.size();
  const double dx = f.dx();
  const KernelProfile kernel(cfg);
  const double span = static_cast<double>(n - 1) * dx;

  // Window radius from the 1/|s| envelope |K_eps(s)| <= ||phi||_1 / (pi |s|): the neglected
  // contribution at any point is at most ||phi||_1 ||f||_1 / (pi R).
  const double norm1 = lp_norm(f, 1.0);
  const double norm2 = lp_norm(f, 2.0);
  double radius = span;
  double tail = 0.0;
  if (norm2 > 0.0) {
    const double needed = kernel.l1_phi() * norm1 / (kPi * 1e-4 * norm2);
    if (needed < span) {
      radius = needed;
      tail = kernel.l1_phi() * norm1 / (kPi * radius);
    }
  }
  const auto reach = static_cast<std::size_t>(std::floor(radius / dx));

  std::vector<double> half(reach + 1, 0.0);
  if (kernel.origin_value()) {
    half[0] = *kernel.origin_value() / cfg.epsilon();
  } else {
    half[0] = kernel.scaled(0.5 * dx);
  }
  parallel_for(reach, [&](std::size_t k) { half[k + 1] = kernel.scaled(static_cast<double>(k + 1) * dx); });

  std::vector<double> taps(2 * n - 1, 0.0);
  for (std::size_t k = 0; k <= reach && k < n; ++k) {
    taps[n - 1 + k] = half[k];
    taps[n - 1 - k] = half[k];
  }
  const std::vector<double> conv = linear_convolution(f.values(), taps);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = dx * conv[i + n - 1];

  PartialResult r{SampledSignal(f.x0(), dx, std::move(out)), 0.0, {}, radius, tail};
  r.leakage = std::max(spectral_leakage(f), spectral_leakage(r.signal));
  if (r.leakage > kLeakageWarn) {
    r.warnings.push_back("grid too small: spectral leakage " + fmt(r.leakage) + " exceeds 1e-6");
  }
  if (!kernel.origin_value()) {
    r.warnings.push_back("kernel is singular at 0; the center tap uses K_eps(dx/2)");
  }
  return r;
}

double partial_hausdorff_direct(const OperatorConfig& cfg, const SampledSignal& f, double x) {
  const UForm uform(cfg.weight(), cfg.scale());
  const double eps = cfg.epsilon();
  const double dx = f.dx();
  const auto [first, last] = interpolant_hull(f);
  const std::size_t nodes = last - first + 1;

  // Inner integral G(w) = \int f(v) sin(w (x - v)) / (x - v) dv, exact for the linear
  // interpolant cell by cell: with y = x - v and f = A + B y on a cell,
  // \int (A + B y) sin(w y) / y dy = A Si(w y) - B cos(w y) / w.
  std::vector<double> y(nodes);
  std::vector<double> fv(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    y[k] = x - f.x(first + k);
    fv[k] = f[first + k];
  }
  const auto inner = [&](double w) {
    if (w == 0.0) return 0.0;
    double sum = 0.0;
    double si_prev = sine_integral(w * y[0]);
    double cos_prev = std::cos(w * y[0]);
    for (std::size_t k = 0; k + 1 < nodes; ++k) {
      const double si_next = sine_integral(w * y[k + 1]);
      const double cos_next = std::cos(w * y[k + 1]);
      const double slope = (fv[k + 1] - fv[k]) / dx;  // df/dv
      const double b = -slope;                        // df/dy
      const double a = fv[k] - b * y[k];
      // y decreases along the cell, so \int_v = \int_{y_{k+1}}^{y_k}.
      sum += a * (si_prev - si_next) - b * (cos_prev - cos_next) / w;
      si_prev = si_next;
      cos_prev = cos_next;
    }
    return sum;
  };

  // Beyond w = 4 pi / dx the inner integral has reached its Dirichlet limit pi f(x).
  const double cutoff = 4.0 * kPi * eps / dx;
  std::vector<quad::Interval> pieces;
  for (const quad::Interval& iv : uform.support()) {
    const double hi = std::min(iv.hi, cutoff);
    if (iv.lo < hi) pieces.push_back({iv.lo, hi});
  }
  double scale = 0.0;
  for (double v : f.values()) scale = std::max(scale, std::abs(v));
  double body = 0.0;
  if (!pieces.empty()) {
    body = quad::integrate({[&](double u) { return uform.psi(u) * inner(u / eps); }, pieces, {}}, 1e-9,
                           1e-13 * std::max(scale, 1e-300))
               .value;
  }
  const double tail = kPi * f.interpolate(x) * uform.mass(cutoff, quad::kInf);
  return (body + tail) / kPi;
}

}  // namespace haus
