#include "haus/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "haus/error.hpp"

namespace haus::quad {

namespace {

constexpr double kNodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.0};
constexpr double kKronrod[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208015582493, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};
constexpr double kGauss[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                              0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                              0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// Consecutive non-shrinking bisections at a boundary before a divergence is declared.
constexpr int kDivergenceRun = 12;
constexpr double kShrinkRatio = 0.97;
constexpr double kTailPower = 4.0;

enum class Map { Identity, Right, Left };

// A subinterval of the support, possibly unbounded, parametrized by u in [0, 1] or [lo, hi].
struct Segment {
  Map map;
  double anchor;  // finite end for mapped segments
  double lo;
  double hi;
};

struct Panel {
  std::size_t segment;
  double lo;
  double hi;
  double value;
  double error;
  int edge;  // -1 touches segment start, +1 touches segment end, 0 interior
  int run;
  double ratio;
  std::size_t order;
};

struct Rule {
  double value;
  double error;
};

class Engine {
 public:
  Engine(const std::function<double(double)>& fn, std::size_t budget) : fn_(fn), budget_(budget) {}

  double eval(const Segment& s, double u) {
    ++evaluations_;
    double t = u;
    double jac = 1.0;
    if (s.map != Map::Identity) {
      // r = ((1 - u)^-m - 1) / m: unit slope at the anchor, and algebraic tails t^-q become
      // (1 - u)^(m (q - 1) - 1), which stays resolvable in double precision for q > 1.
      const double w = 1.0 - u;
      const double r = std::expm1(-kTailPower * std::log1p(-u)) / kTailPower;
      t = s.map == Map::Right ? s.anchor + r : s.anchor - r;
      jac = std::pow(w, -kTailPower - 1.0);
      if (!std::isfinite(t)) return 0.0;
    }
    const double y = fn_(t);
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg << "integrand is not finite at t = " << t;
      throw InvalidInput(msg.str());
    }
    return y == 0.0 ? 0.0 : y * jac;
  }

  Rule kronrod(const Segment& s, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double dhalf = std::abs(half);
    double fv1[10];
    double fv2[10];
    const double fc = eval(s, center);
    double resg = 0.0;
    double resk = kKronrod[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 5; ++j) {
      const int jtw = 2 * j + 1;
      const double dx = half * kNodes[jtw];
      const double f1 = eval(s, center - dx);
      const double f2 = eval(s, center + dx);
      fv1[jtw] = f1;
      fv2[jtw] = f2;
      resg += kGauss[j] * (f1 + f2);
      resk += kKronrod[jtw] * (f1 + f2);
      resabs += kKronrod[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
      const int jtwm1 = 2 * j;
      const double dx = half * kNodes[jtwm1];
      const double f1 = eval(s, center - dx);
      const double f2 = eval(s, center + dx);
      fv1[jtwm1] = f1;
      fv2[jtwm1] = f2;
      resk += kKronrod[jtwm1] * (f1 + f2);
      resabs += kKronrod[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = 0.5 * resk;
    double resasc = kKronrod[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) resasc += kKronrod[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    const double result = resk * half;
    resabs *= dhalf;
    resasc *= dhalf;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    return {result, err};
  }

  std::size_t evaluations() const noexcept { return evaluations_; }
  bool exhausted() const noexcept { return evaluations_ >= budget_; }

 private:
  const std::function<double(double)>& fn_;
  std::size_t budget_;
  std::size_t evaluations_ = 0;
};

std::vector<Segment> build_segments(const Integrand& g) {
  std::vector<Segment> segments;
  for (const Interval& iv : g.support) {
    if (!(iv.lo < iv.hi)) continue;
    std::vector<double> cuts{iv.lo};
    std::vector<double> inner;
    for (double p : g.singular_points) {
      if (p > iv.lo && p < iv.hi) inner.push_back(p);
    }
    if (std::isinf(iv.lo) && std::isinf(iv.hi) && inner.empty()) inner.push_back(0.0);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    cuts.insert(cuts.end(), inner.begin(), inner.end());
    cuts.push_back(iv.hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i];
      const double b = cuts[i + 1];
      if (std::isinf(b)) {
        segments.push_back({Map::Right, a, 0.0, 1.0});
      } else if (std::isinf(a)) {
        segments.push_back({Map::Left, b, 0.0, 1.0});
      } else {
        segments.push_back({Map::Identity, 0.0, a, b});
      }
    }
  }
  return segments;
}

struct ByError {
  const std::vector<Panel>* panels;
  bool operator()(std::size_t a, std::size_t b) const {
    const Panel& pa = (*panels)[a];
    const Panel& pb = (*panels)[b];
    if (pa.error != pb.error) return pa.error < pb.error;
    return pa.order > pb.order;
  }
};

}  // namespace

Integrand Integrand::on(std::function<double(double)> fn, double lo, double hi, std::vector<double> singular) {
  return {std::move(fn), {{lo, hi}}, std::move(singular)};
}

Integrand Integrand::symmetric(std::function<double(double)> fn, double inner, double outer,
                               std::vector<double> singular) {
  return {std::move(fn), {{-outer, -inner}, {inner, outer}}, std::move(singular)};
}

QuadResult integrate(const Integrand& g, double rel_tol, double abs_tol, std::size_t max_evaluations) {
  if (!(rel_tol > 0.0) && !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  const std::vector<Segment> segments = build_segments(g);
  Engine engine(g.evaluator, max_evaluations);

  std::vector<Panel> panels;
  panels.reserve(256);
  std::size_t order = 0;
  double total = 0.0;
  double total_err = 0.0;

  std::priority_queue<std::size_t, std::vector<std::size_t>, ByError> queue(ByError{&panels});
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Rule r = engine.kronrod(segments[s], segments[s].lo, segments[s].hi);
    panels.push_back({s, segments[s].lo, segments[s].hi, r.value, r.error, 2, 0, 0.0, order++});
    total += r.value;
    total_err += r.error;
    queue.push(panels.size() - 1);
  }

  auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  auto ordered_total = [&] {
    std::vector<const Panel*> live;
    live.reserve(panels.size());
    for (const Panel& p : panels) {
      if (p.order != std::numeric_limits<std::size_t>::max()) live.push_back(&p);
    }
    std::sort(live.begin(), live.end(), [](const Panel* a, const Panel* b) {
      return a->segment != b->segment ? a->segment < b->segment : a->lo < b->lo;
    });
    double sum = 0.0;
    for (const Panel* p : live) sum += p->value;
    return sum;
  };
  auto finish = [&] {
    const double value = ordered_total();
    std::size_t live = 0;
    for (const Panel& p : panels) live += p.order != std::numeric_limits<std::size_t>::max();
    return QuadResult{value, total_err, live, engine.evaluations()};
  };

  std::size_t iterations = 0;
  while (total_err > tolerance()) {
    if (queue.empty()) {
      if (total_err <= 100.0 * tolerance()) break;
      throw ConvergenceFailure("quadrature limited by roundoff", ordered_total(), total_err);
    }
    if (engine.exhausted()) {
      throw ConvergenceFailure("quadrature evaluation budget exhausted", ordered_total(), total_err);
    }
    const std::size_t idx = queue.top();
    queue.pop();
    const Panel parent = panels[idx];
    const Segment& seg = segments[parent.segment];
    const double mid = 0.5 * (parent.lo + parent.hi);
    const double scale = std::max({std::abs(parent.lo), std::abs(parent.hi), kTiny});
    if (!(mid > parent.lo && mid < parent.hi) || (parent.hi - parent.lo) < 8.0 * kEps * scale) {
      continue;
    }
    panels[idx].order = std::numeric_limits<std::size_t>::max();
    const Rule left = engine.kronrod(seg, parent.lo, mid);
    const Rule right = engine.kronrod(seg, mid, parent.hi);

    auto child_edge = [&](bool is_left) {
      const bool at_lo = is_left && (parent.edge == -1 || parent.edge == 2);
      const bool at_hi = !is_left && (parent.edge == 1 || parent.edge == 2);
      return at_lo ? -1 : (at_hi ? 1 : 0);
    };
    for (int side = 0; side < 2; ++side) {
      const bool is_left = side == 0;
      const Rule& r = is_left ? left : right;
      Panel child{parent.segment, is_left ? parent.lo : mid, is_left ? mid : parent.hi, r.value, r.error,
                  child_edge(is_left), 0, 0.0, order++};
      if (child.edge != 0 && parent.value != 0.0) {
        // A power-law blow-up t^-b (b >= 1) halves into children carrying a constant
        // fraction 2^(b-1) >= 1 of the parent; a resolving peak does not keep a constant ratio.
        child.ratio = std::abs(child.value) / std::abs(parent.value);
        const bool steady = parent.run == 0 || std::abs(child.ratio - parent.ratio) <= 0.05 * child.ratio;
        const bool stalled = child.ratio >= kShrinkRatio && child.ratio <= 64.0 && steady &&
                             std::abs(child.value) > std::max(abs_tol, kTiny);
        child.run = stalled ? parent.run + 1 : 0;
        if (child.run >= kDivergenceRun) {
          std::ostringstream msg;
          msg << "integral diverges near t = ";
          const double u = child.edge == -1 ? seg.lo : seg.hi;
          if (seg.map == Map::Identity) {
            msg << u;
          } else if (u >= 1.0) {
            msg << (seg.map == Map::Right ? "+inf" : "-inf");
          } else {
            msg << seg.anchor;
          }
          throw Divergence(msg.str(), ordered_total(), total_err);
        }
      }
      panels.push_back(child);
      queue.push(panels.size() - 1);
    }
    total += left.value + right.value - parent.value;
    total_err += left.error + right.error - parent.error;
    // Periodically resynchronize the running sums to avoid drift.
    if (++iterations % 256 == 0) {
      double e = 0.0;
      for (const Panel& p : panels) {
        if (p.order != std::numeric_limits<std::size_t>::max()) e += p.error;
      }
      total = ordered_total();
      total_err = e;
    }
  }
  return finish();
}

double wynn_epsilon(const std::vector<double>& partial_sums) {
  if (partial_sums.empty()) return 0.0;
  if (partial_sums.size() < 3) return partial_sums.back();
  std::vector<double> prev(partial_sums.size() + 1, 0.0);
  std::vector<double> cur(partial_sums);
  double best = cur.back();
  for (std::size_t k = 1; cur.size() > 1; ++k) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t n = 0; n + 1 < cur.size(); ++n) {
      const double diff = cur[n + 1] - cur[n];
      if (diff == 0.0 || !std::isfinite(1.0 / diff)) return (k % 2 == 1) ? cur[n + 1] : best;
      next[n] = prev[n + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  return best;
}

namespace {

// Sum of half-period blocks from `start` toward +inf (direction = +1) or -inf (-1).
QuadResult oscillatory_tail(const std::function<double(double)>& fn, double start, int direction, double half_period,
                            double rel_tol, double abs_tol, std::size_t budget) {
  constexpr std::size_t kMaxBlocks = 4000;
  constexpr std::size_t kWindow = 40;
  std::vector<double> partial;
  double sum = 0.0;
  double err = 0.0;
  std::size_t evals = 0;
  std::size_t panels = 0;
  double last_estimate = 0.0;
  int stable = 0;
  for (std::size_t k = 0; k < kMaxBlocks; ++k) {
    const double a = start + direction * static_cast<double>(k) * half_period;
    const double b = start + direction * static_cast<double>(k + 1) * half_period;
    const QuadResult block = integrate(Integrand::on(fn, std::min(a, b), std::max(a, b)), rel_tol, 0.1 * abs_tol,
                                       budget > evals ? budget - evals : 1);
    evals += block.evaluations;
    panels += block.panels_used;
    sum += block.value;
    err += block.abs_error_estimate;
    partial.push_back(sum);
    if (partial.size() < 6) continue;
    const std::size_t from = partial.size() > kWindow ? partial.size() - kWindow : 0;
    const double estimate = wynn_epsilon(std::vector<double>(partial.begin() + static_cast<long>(from), partial.end()));
    const double tol = std::max(abs_tol, rel_tol * std::abs(estimate));
    if (std::abs(estimate - last_estimate) <= tol && std::abs(block.value) <= std::max(1e3 * tol, abs_tol)) {
      if (++stable >= 2) return {estimate, err + std::abs(estimate - last_estimate), panels, evals};
    } else {
      stable = 0;
    }
    last_estimate = estimate;
    if (evals >= budget) break;
  }
  throw ConvergenceFailure("oscillatory tail did not converge", last_estimate, err);
}

}  // namespace

QuadResult integrate_oscillatory(const Integrand& g, double frequency, double rel_tol, double abs_tol,
                                 std::size_t max_evaluations) {
  if (frequency == 0.0) return integrate(g, rel_tol, abs_tol, max_evaluations);
  if (!std::isfinite(frequency)) throw DomainError("oscillation frequency must be finite");
  const double half = std::numbers::pi / std::abs(frequency);
  const double tol_abs = abs_tol > 0.0 ? abs_tol : 1e-300;

  QuadResult total;
  Integrand finite{g.evaluator, {}, g.singular_points};
  for (const Interval& iv : g.support) {
    if (!(iv.lo < iv.hi)) continue;
    double lo = iv.lo;
    double hi = iv.hi;
    if (std::isinf(hi)) {
      const double start = std::isinf(lo) ? 0.0 : lo;
      const QuadResult tail = oscillatory_tail(g.evaluator, start, +1, half, rel_tol, tol_abs, max_evaluations);
      total.value += tail.value;
      total.abs_error_estimate += tail.abs_error_estimate;
      total.panels_used += tail.panels_used;
      total.evaluations += tail.evaluations;
      hi = start;
    }
    if (std::isinf(lo)) {
      const QuadResult tail = oscillatory_tail(g.evaluator, hi, -1, half, rel_tol, tol_abs, max_evaluations);
      total.value += tail.value;
      total.abs_error_estimate += tail.abs_error_estimate;
      total.panels_used += tail.panels_used;
      total.evaluations += tail.evaluations;
      lo = hi;
    }
    if (lo < hi) {
      finite.support.push_back({lo, hi});
      const auto pieces = static_cast<std::size_t>(std::ceil((hi - lo) / half));
      for (std::size_t k = 1; k < pieces; ++k) finite.singular_points.push_back(lo + static_cast<double>(k) * half);
    }
  }
  if (!finite.support.empty()) {
    const QuadResult body = integrate(finite, rel_tol, abs_tol, max_evaluations);
    total.value += body.value;
    total.abs_error_estimate += body.abs_error_estimate;
    total.panels_used += body.panels_used;
    total.evaluations += body.evaluations;
  }
  return total;
}

}  // namespace haus::quad
