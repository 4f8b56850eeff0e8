// FFTW-backed discrete transforms under the x-origin-aware, dx-scaled convention.

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "haus/error.hpp"
#include "haus/signal.hpp"

namespace haus {

namespace {

// fftw planning is not thread safe; execution on caller-owned buffers is.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void execute(std::vector<Complex>& in, std::vector<Complex>& out, int sign) {
  fftw_plan plan = plans().get(in.size(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

Spectrum::Spectrum(double xi0, double dxi, double origin, std::vector<Complex> values)
    : xi0_(xi0), dxi_(dxi), origin_(origin), values_(std::move(values)) {
  if (!(dxi_ > 0.0)) throw InvalidInput("spectrum spacing must be positive");
  for (const Complex& c : values_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidInput("spectrum value is not finite");
  }
}

Spectrum Spectrum::multiplied(const std::function<double(double)>& m) const {
  std::vector<Complex> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] *= m(xi(k));
  return Spectrum(xi0_, dxi_, origin_, std::move(v));
}

double Spectrum::symmetry_defect() const noexcept {
  const std::size_t n = values_.size();
  double peak = 0.0;
  for (const Complex& c : values_) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 0.0;
  // Mirror of xi_k is xi_{n-k} for a centered even-length grid; k = 0 is the unpaired Nyquist bin.
  double defect = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    defect = std::max(defect, std::abs(values_[k] - std::conj(values_[n - k])));
  }
  return defect / peak;
}

Spectrum forward_fourier(const SampledSignal& signal) {
  const SampledSignal f = signal.padded_pow2();
  const std::size_t n = f.size();
  const double dx = f.dx();
  const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  const double xi0 = -static_cast<double>(n / 2) * dxi;

  std::vector<Complex> in(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = f[j];
  std::vector<Complex> out(n);
  execute(in, out, FFTW_FORWARD);

  std::vector<Complex> values(n);
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t k = (q + n / 2) % n;
    const double xi = xi0 + static_cast<double>(q) * dxi;
    values[q] = dx * std::polar(1.0, -f.x0() * xi) * out[k];
  }
  return Spectrum(xi0, dxi, f.x0(), std::move(values));
}

namespace {

double coefficient_norm(const Spectrum& s) {
  double sum = 0.0;
  for (const Complex& v : s.values()) sum += std::norm(v);
  return std::sqrt(sum);
}

}  // namespace

SampledSignal inverse_fourier(const Spectrum& spectrum) { return inverse_fourier(spectrum, 0.0); }

SampledSignal inverse_fourier(const Spectrum& spectrum, double reference_norm) {
  const std::size_t n = spectrum.size();
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidInput("spectrum length must be a power of two");
  const double dx = 2.0 * std::numbers::pi / (static_cast<double>(n) * spectrum.dxi());
  const double x0 = spectrum.origin();

  std::vector<Complex> in(n);
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t k = (q + n / 2) % n;
    in[k] = spectrum[q] * std::polar(1.0, x0 * spectrum.xi(q)) / (static_cast<double>(n) * dx);
  }
  std::vector<Complex> out(n);
  execute(in, out, FFTW_BACKWARD);

  std::vector<double> values(n);
  double re2 = 0.0;
  double im2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = out[j].real();
    re2 += out[j].real() * out[j].real();
    im2 += out[j].imag() * out[j].imag();
  }
  // Residue is judged against the output norm, or against the transform of a reference
  // spectrum of coefficient norm `reference_norm` (Parseval) when that is larger.
  const double reference = reference_norm / (std::sqrt(static_cast<double>(n)) * dx);
  if (im2 > 0.0 && std::sqrt(im2) > 1e-9 * std::max(std::sqrt(re2 + im2), reference)) {
    throw SymmetryViolation("spectrum is not conjugate symmetric: imaginary residue too large");
  }
  return SampledSignal(x0, dx, std::move(values));
}

SampledSignal apply_multiplier(const Spectrum& spectrum, std::size_t n, const std::function<double(double)>& m) {
  SampledSignal full = inverse_fourier(spectrum.multiplied(m), coefficient_norm(spectrum));
  return full.size() == n ? full : full.truncated(n);
}

SampledSignal apply_multiplier(const SampledSignal& f, const std::function<double(double)>& m) {
  return apply_multiplier(forward_fourier(f), f.size(), m);
}

std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(len);
  std::vector<Complex> fa(n);
  std::vector<Complex> fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  std::vector<Complex> ta(n);
  std::vector<Complex> tb(n);
  execute(fa, ta, FFTW_FORWARD);
  execute(fb, tb, FFTW_FORWARD);
  for (std::size_t k = 0; k < n; ++k) ta[k] *= tb[k] / static_cast<double>(n);
  execute(ta, fa, FFTW_BACKWARD);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace haus
