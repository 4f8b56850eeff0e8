#include "haus/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "haus/error.hpp"

namespace haus {

namespace {

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "sample " << i << " is not finite";
      throw InvalidInput(msg.str());
    }
  }
}

}  // namespace

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double smooth_bump(double u) noexcept {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - a * a));
}

Grid Grid::centered(double dx, std::size_t n) {
  Grid g{-static_cast<double>(n / 2) * dx, dx, n};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidInput("grid spacing must be positive and finite");
  if (!std::isfinite(x0)) throw InvalidInput("grid origin must be finite");
  if (n < 2) throw InvalidInput("grid needs at least two points");
}

SampledSignal::SampledSignal(double x0, double dx, std::vector<double> values)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
  Grid{x0_, dx_, values_.size()}.validate();
  require_finite(values_);
}

SampledSignal::SampledSignal(const Grid& grid, std::vector<double> values)
    : SampledSignal(grid.x0, grid.dx, std::move(values)) {
  if (values_.size() != grid.n) throw InvalidInput("sample count does not match grid size");
}

SampledSignal SampledSignal::from_function(const Grid& grid, const std::function<double(double)>& fn) {
  grid.validate();
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = fn(grid.at(i));
  return SampledSignal(grid, std::move(v));
}

SampledSignal SampledSignal::zeros(const Grid& grid) { return SampledSignal(grid, std::vector<double>(grid.n, 0.0)); }

double SampledSignal::interpolate(double x) const noexcept {
  const double u = (x - x0_) / dx_;
  const double last = static_cast<double>(values_.size() - 1);
  if (!(u >= 0.0) || u > last) return 0.0;
  auto i = static_cast<std::size_t>(u);
  if (i >= values_.size() - 1) return values_.back();
  const double w = u - static_cast<double>(i);
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

std::pair<std::size_t, std::size_t> SampledSignal::nonzero_hull() const noexcept {
  std::size_t first = 0;
  while (first < values_.size() && values_[first] == 0.0) ++first;
  if (first == values_.size()) return {0, values_.size() - 1};
  std::size_t last = values_.size() - 1;
  while (values_[last] == 0.0) --last;
  return {first, last};
}

SampledSignal SampledSignal::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return SampledSignal(x0_, dx_, std::move(v));
}

SampledSignal SampledSignal::plus(const SampledSignal& other) const {
  if (other.size() != size()) throw InvalidInput("signals live on different grids");
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return SampledSignal(x0_, dx_, std::move(v));
}

SampledSignal SampledSignal::minus(const SampledSignal& other) const { return plus(other.scaled(-1.0)); }

SampledSignal SampledSignal::shifted(long cells) const {
  const long n = static_cast<long>(values_.size());
  std::vector<double> v(values_.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    const long src = i - cells;
    if (src >= 0 && src < n) v[static_cast<std::size_t>(i)] = values_[static_cast<std::size_t>(src)];
  }
  return SampledSignal(x0_, dx_, std::move(v));
}

SampledSignal SampledSignal::truncated(std::size_t n) const {
  if (n > values_.size() || n < 2) throw InvalidInput("bad truncation length");
  return SampledSignal(x0_, dx_, std::vector<double>(values_.begin(), values_.begin() + static_cast<long>(n)));
}

SampledSignal SampledSignal::padded_pow2() const {
  const std::size_t n = next_pow2(values_.size());
  if (n == values_.size()) return *this;
  std::vector<double> v(values_);
  v.resize(n, 0.0);
  return SampledSignal(x0_, dx_, std::move(v));
}

double lp_norm(const SampledSignal& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  const auto v = f.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double term = std::pow(std::abs(v[i]), p);
    sum += (i == 0 || i + 1 == v.size()) ? 0.5 * term : term;
  }
  return std::pow(sum * f.dx(), 1.0 / p);
}

double integral(const SampledSignal& f) {
  const auto v = f.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += (i == 0 || i + 1 == v.size()) ? 0.5 * v[i] : v[i];
  return sum * f.dx();
}

double sup_norm(const SampledSignal& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double sinc_transform(double x) noexcept {
  const double a = std::abs(x);
  if (a < 1.0) return std::numbers::pi;
  if (a == 1.0) return 0.5 * std::numbers::pi;
  return 0.0;
}

double spectral_leakage(const SampledSignal& f) {
  const auto v = f.values();
  const std::size_t n = v.size();
  const std::size_t edge = std::max<std::size_t>(1, n / 32);
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = v[i] * v[i];
    total += e;
    if (i < edge || i >= n - edge) outer += e;
  }
  if (total == 0.0) return 0.0;
  const Spectrum spec = forward_fourier(f);
  const double cutoff = (15.0 / 16.0) * std::numbers::pi / f.dx();
  double band_total = 0.0;
  double band_outer = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double e = std::norm(spec[k]);
    band_total += e;
    if (std::abs(spec.xi(k)) > cutoff) band_outer += e;
  }
  const double spatial = outer / total;
  const double spectral = band_total > 0.0 ? band_outer / band_total : 0.0;
  return std::max(spatial, spectral);
}

SampledSignal make_atom(const AtomSpec& spec, const Grid& grid) {
  grid.validate();
  if (!(spec.halfwidth > 0.0)) throw DomainError("atom halfwidth must be positive");
  if (2.0 * spec.halfwidth / grid.dx < 64.0) {
    throw ResolutionError("grid too coarse: fewer than 64 points across the atom support");
  }
  if (spec.center - spec.halfwidth < grid.x0 || spec.center + spec.halfwidth > grid.last()) {
    throw ResolutionError("grid does not cover the atom support");
  }
  const double c = spec.center;
  const double h = spec.halfwidth;
  auto shape = [&](double x) {
    const double u = (x - c) / h;
    if (spec.shape == AtomShape::SmoothOddBump) return u * smooth_bump(u);
    return smooth_bump((x - (c - 0.5 * h)) / (0.5 * h)) - smooth_bump((x - (c + 0.5 * h)) / (0.5 * h));
  };
  SampledSignal raw = SampledSignal::from_function(grid, shape);

  // Remove the residual mean with a smooth even bump on the same support.
  const SampledSignal corrector = SampledSignal::from_function(grid, [&](double x) { return smooth_bump((x - c) / h); });
  const double mean = integral(raw);
  const double mass = integral(corrector);
  std::vector<double> v(raw.values().begin(), raw.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= mean * corrector[i] / mass;

  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  const double scale = 1.0 / (2.0 * h) / peak;
  for (double& x : v) x *= scale;
  return SampledSignal(grid, std::move(v));
}

SampledSignal make_bandlimited(double bandwidth, const Grid& grid) {
  grid.validate();
  const double nyquist = std::numbers::pi / grid.dx;
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
  if (bandwidth >= nyquist) throw AliasingError("bandwidth at or above the Nyquist frequency");
  const std::size_t n = next_pow2(grid.n);
  const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(n) * grid.dx);
  const double xi0 = -static_cast<double>(n / 2) * dxi;
  std::vector<Complex> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double xi = xi0 + static_cast<double>(k) * dxi;
    values[k] = Complex(0.0, xi * smooth_bump(xi / bandwidth));
  }
  const SampledSignal full = inverse_fourier(Spectrum(xi0, dxi, grid.x0, std::move(values)));
  std::vector<double> v(full.values().begin(), full.values().begin() + static_cast<long>(grid.n));
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak > 0.0) {
    for (double& x : v) x /= peak;
  }
  return SampledSignal(grid, std::move(v));
}

}  // namespace haus
