#pragma once

#include <string>
#include <vector>

#include "knot/curve.hpp"

namespace knot {

// Multiplies mode k by the Fourier symbol (2π)^α q_k |k|^{α+1} of the leading operator Q^α.
Spectrum apply_q_multiplier(const Spectrum& spectrum, double alpha);

// (Σ_k (1+k²)^s |f̂(k)|²)^{1/2}, s >= 0.
double sobolev_norm(const Spectrum& spectrum, double s);

// Coefficient k multiplied by (2πik)^r.
Spectrum differentiate(const Spectrum& spectrum, int order);

struct Cor42Result {
  double lhs = 0.0;       // ‖∂^{l+3}γ‖_{H^{m+α-2}}
  double rhs = 0.0;       // ‖∂^l Q^α γ‖_{H^m}
  double constant = 0.0;  // C̃ = inf_{k≠0} {q_k² (2π)^{-6} 2^{2-α}}^{-1/2}
  // C̃ from the asymptotic value q_∞ alone; the two differ when the infimum is attained at finite k.
  double constant_asymptotic = 0.0;
  int argmin_k = 0;
  bool holds = false;     // lhs <= C̃ · rhs (with a relative round-off allowance of 1e-12)
};

// Checks ‖∂^{l+3}γ‖_{H^{m+α-2}} <= C̃ ‖∂^l Q^α γ‖_{H^m} spectrally.
Cor42Result cor42_check(const ClosedCurve& curve, double alpha, int l, double m);

enum class DecayVerdict { Exponential, Subexponential, Inconclusive };
std::string to_string(DecayVerdict v);

struct DecayDiagnostics {
  double decay_rate = 0.0;   // r in |γ̂(k)| ≈ C e^{-rk}
  double fit_quality = 0.0;  // R² of the linear fit of log|γ̂(k)| against k
  double power_fit_quality = 0.0;  // R² of log|γ̂(k)| against log k, for comparison
  int fitted_modes = 0;
  double trial_radius = 0.0;  // r₀ used in the factorial ratios
  std::vector<double> factorial_ratios;  // ‖∂^k γ‖_{H^{1+β}} r₀^k / k!, k = 0..cutoff
  double factorial_sup = 0.0;
  DecayVerdict verdict = DecayVerdict::Inconclusive;
};

// Fits the tail envelope sup_{j>=k} |γ̂(j)| over max(4, K/3) <= k <= K, where K is the last mode above a
// noise floor of 1e-13 relative to the largest one, and evaluates the factorial ratios at r₀ = r / (4π).
DecayDiagnostics decay_diagnostics(const ClosedCurve& curve, double beta, int cutoff = 24);

struct BanachCheck {
  double lhs = 0.0;  // ‖fg‖_{H^m}
  double rhs = 0.0;  // ‖f‖_{H^m} ‖g‖_{H^m}
  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

// Product of two scalar spectra by direct convolution.
Spectrum multiply(const Spectrum& f, const Spectrum& g);
BanachCheck banach_product_check(const Spectrum& f, const Spectrum& g, int m);

}  // namespace knot
