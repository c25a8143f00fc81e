#pragma once

#include "knot/core.hpp"

namespace knot {

// Exponent pair of the O'Hara energy E^α with p = 1.
struct AlphaParams {
  double alpha = 2.5;

  double beta() const { return alpha - 2.0; }
  // Throws ParameterError unless 2 < α < 3; α = 2 (Möbius energy) only when allow_mobius is set.
  static AlphaParams checked(double alpha, bool allow_mobius = false);
};

// Si_β(x) = ∫_0^x sin t / t^{1+β} dt for 0 < β < 1, extended as an odd function.
double si_beta(double x, double beta);
// sup_x Si_β(x) = Si_β(π).
double si_beta_max(double beta);
// Si_β(∞) = Γ(-β) sin(-πβ/2) evaluated from partial sums over arches with repeated averaging.
double si_beta_limit(double beta);

// λ_k = ∫_0^{kπ} sin τ / τ^{α-1} dτ, k >= 0.
double lambda_k(int k, double alpha);
double lambda_infinity(double alpha);

// q_k = 4π ∫_0^{kπ} (σ² - 2 + 2cos σ) σ^{-2-α} dσ, even in k, q_0 = 0.
double q_k(int k, double alpha);
// lim q_k = 8π λ_∞ / (α(α+1)(α-1)).
double q_infinity(double alpha);

// Fourier symbol of the leading operator of the first variation on R/Z: (2π)^α q_k |k|^{α+1}.
double q_symbol(int k, double alpha);

}  // namespace knot
