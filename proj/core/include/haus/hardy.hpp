#pragma once

// Hardy-space numerics: the radial maximal function with a fixed compactly supported
// mollifier, an L1 estimate of it standing in for the H1 norm, Riesz derivatives, and an
// upper bound on the K-functional built from spectral low-pass witnesses.

#include <string>
#include <vector>

#include "haus/signal.hpp"

namespace haus {

/// Phi(x) = c exp(-1 / (1 - x^2)) on |x| < 1 with c chosen so that \int Phi = 1.
double mollifier(double x) noexcept;
/// Fourier transform of Phi (real and even); zero beyond the tabulated band.
double mollifier_hat(double xi) noexcept;
double mollifier_normalization() noexcept;

struct MaximalConfig {
  double s_min = 0.0;
  double s_max = 0.0;
  double ratio = 1.189207115002721;  // 2^(1/4)

  /// s_min * ratio^k for k = 0, 1, ... while <= s_max.
  std::vector<double> scales() const;
  /// s in [dx, width / 4] for the grid of f.
  static MaximalConfig for_signal(const SampledSignal& f);
  void validate() const;
};

/// max over the scale grid of |Phi_s * f|, each convolution done spectrally on a grid
/// zero-padded to twice the power-of-two length so nothing wraps around.
SampledSignal maximal_function(const SampledSignal& f, const MaximalConfig& cfg);

struct H1Estimate {
  double value = 0.0;
  std::vector<std::string> warnings;
};

/// L1 norm of the maximal function. Warns when |\int f| > 1e-6 ||f||_1, since such f is not
/// in H1 and the estimate then grows with s_max.
H1Estimate h1_norm_estimate(const SampledSignal& f, const MaximalConfig& cfg);

/// Inverse transform of |xi|^sigma f^(xi).
SampledSignal riesz_derivative(const SampledSignal& f, double sigma);

/// Smooth spectral low-pass of f: multiplier 1 on |xi| <= lambda, 0 on |xi| >= 2 lambda.
SampledSignal low_pass(const SampledSignal& f, double lambda);
/// The cutoff profile used by low_pass, as a function of |xi| / lambda.
double low_pass_profile(double u) noexcept;

struct KFunctionalBound {
  double sigma = 0.0;
  double t = 0.0;
  double value = 0.0;
  /// Low-pass cutoff of the witness; 0 means g = 0 and +inf means g = f.
  double witness_cutoff = 0.0;
};

/// Precomputed witness terms A = ||f - g||_H1 and B = ||I^sigma g||_H1 for a fixed
/// lambda grid, so that bounds at many t are cheap and exactly monotone in t.
class KFunctionalTable {
 public:
  KFunctionalTable(const SampledSignal& f, double sigma, const MaximalConfig& cfg,
                   std::vector<double> lambdas = {});

  KFunctionalBound at(double t) const;
  double sigma() const noexcept { return sigma_; }
  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  const std::vector<double>& distance_terms() const noexcept { return a_; }
  const std::vector<double>& smoothness_terms() const noexcept { return b_; }

  /// Geometric grid with ratio sqrt(2) from 4 dxi up to the Nyquist frequency of f's grid.
  static std::vector<double> default_lambdas(const SampledSignal& f);

 private:
  double sigma_;
  std::vector<double> lambdas_;  // includes 0 and +inf
  std::vector<double> a_;
  std::vector<double> b_;
};

KFunctionalBound k_functional_upper(const SampledSignal& f, double sigma, double t, const MaximalConfig& cfg);

}  // namespace haus
