#pragma once

// Uniform-grid signals and the non-unitary Fourier pair
//
//   f^(xi) = \int f(x) e^{-i x xi} dx,      f(x) = (1/2pi) \int f^(xi) e^{i x xi} dxi,
//
// discretized as a dx-scaled DFT on a power-of-two grid.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace haus {

using Complex = std::complex<double>;

/// Uniform abscissa grid: x_i = x0 + i * dx, i = 0 .. n-1.
struct Grid {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t n = 2;

  /// Grid symmetric about 0 with x_{n/2} == 0 exactly; n even.
  static Grid centered(double dx, std::size_t n);

  double at(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
  double last() const noexcept { return at(n - 1); }
  double width() const noexcept { return static_cast<double>(n) * dx; }
  void validate() const;
};

class SampledSignal {
 public:
  SampledSignal(double x0, double dx, std::vector<double> values);
  SampledSignal(const Grid& grid, std::vector<double> values);

  /// Samples fn at every grid point.
  static SampledSignal from_function(const Grid& grid, const std::function<double(double)>& fn);
  static SampledSignal zeros(const Grid& grid);

  double x0() const noexcept { return x0_; }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return values_.size(); }
  Grid grid() const noexcept { return {x0_, dx_, values_.size()}; }
  double x(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * dx_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Piecewise-linear interpolant, zero outside [x0, x_{n-1}].
  double interpolate(double x) const noexcept;
  /// Index range [first, last] of nonzero samples; {0, n-1} when all samples vanish.
  std::pair<std::size_t, std::size_t> nonzero_hull() const noexcept;

  SampledSignal scaled(double c) const;
  SampledSignal plus(const SampledSignal& other) const;
  SampledSignal minus(const SampledSignal& other) const;
  /// Shift by whole cells: out[i] = in[i - cells], zero filled.
  SampledSignal shifted(long cells) const;
  /// First `n` samples (n <= size()).
  SampledSignal truncated(std::size_t n) const;
  /// Zero-padded on the right to the next power of two.
  SampledSignal padded_pow2() const;

 private:
  double x0_;
  double dx_;
  std::vector<double> values_;
};

/// Frequency samples on xi_k = xi0 + k * dxi, k = 0 .. N-1, with xi0 = -(N/2) dxi.
/// `origin` is the abscissa of the first sample of the signal the spectrum belongs to;
/// it fixes the phase convention and is needed to invert.
class Spectrum {
 public:
  Spectrum(double xi0, double dxi, double origin, std::vector<Complex> values);

  double xi0() const noexcept { return xi0_; }
  double dxi() const noexcept { return dxi_; }
  double origin() const noexcept { return origin_; }
  std::size_t size() const noexcept { return values_.size(); }
  double xi(std::size_t k) const noexcept { return xi0_ + static_cast<double>(k) * dxi_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex operator[](std::size_t k) const noexcept { return values_[k]; }

  /// values[k] * m(xi_k).
  Spectrum multiplied(const std::function<double(double)>& m) const;
  /// Largest |F(-xi) - conj F(xi)| relative to max |F|; the unpaired Nyquist bin is skipped.
  double symmetry_defect() const noexcept;

 private:
  double xi0_;
  double dxi_;
  double origin_;
  std::vector<Complex> values_;
};

Spectrum forward_fourier(const SampledSignal& f);
/// Real part of the inverse transform; raises SymmetryViolation when the imaginary residue
/// exceeds 1e-9 of the L2 norm.
SampledSignal inverse_fourier(const Spectrum& spectrum);
/// As above, with the residue also measured against a spectrum of coefficient norm
/// `reference_norm` (sqrt of sum |F_k|^2); used when F is a filtered copy of that spectrum.
SampledSignal inverse_fourier(const Spectrum& spectrum, double reference_norm);
/// inverse_fourier(forward_fourier(f) * m(xi)) cropped back to f's grid.
SampledSignal apply_multiplier(const SampledSignal& f, const std::function<double(double)>& m);
SampledSignal apply_multiplier(const Spectrum& spectrum, std::size_t n, const std::function<double(double)>& m);

/// Full linear convolution c[k] = sum_j a[j] b[k - j], length |a| + |b| - 1, via zero-padded FFT.
std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b);

/// Trapezoid-rule (\int |f|^p)^{1/p}; p >= 1.
double lp_norm(const SampledSignal& f, double p);
/// Trapezoid-rule \int f.
double integral(const SampledSignal& f);
double sup_norm(const SampledSignal& f);

/// Fourier transform of sin(x)/x: pi on |x| < 1, pi/2 at |x| == 1, 0 beyond.
double sinc_transform(double x) noexcept;

/// Fraction of energy in the outer 1/32 of the grid at either end, or in the top 1/16 of
/// the frequency band, whichever is larger.
double spectral_leakage(const SampledSignal& f);

enum class AtomShape { SmoothOddBump, DifferenceOfBumps };

struct AtomSpec {
  double center = 0.0;
  double halfwidth = 1.0;
  AtomShape shape = AtomShape::SmoothOddBump;
};

/// Mean-zero atom supported in [center - halfwidth, center + halfwidth] with sup norm
/// 1 / (2 halfwidth). Requires >= 64 grid points across the support.
SampledSignal make_atom(const AtomSpec& spec, const Grid& grid);

/// Real signal with spectrum i xi bump(xi / bandwidth), supported in [-B, B] and vanishing at 0.
/// Normalized to unit sup norm.
SampledSignal make_bandlimited(double bandwidth, const Grid& grid);

/// The C-infinity bump exp(-1 / (1 - u^2)) on |u| < 1, zero elsewhere.
double smooth_bump(double u) noexcept;

std::size_t next_pow2(std::size_t n) noexcept;

}  // namespace haus
