#pragma once

#include <vector>

#include "knot/curve.hpp"

namespace knot {

// Truncation parameters ε of the principal-value integrals and the ε -> 0 extrapolation.
struct TruncationLadder {
  std::vector<double> eps_values{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  // Gauss-Legendre nodes per w-panel. Panels grow geometrically (ratio 2) away from ε
  // and are capped in width by the curve's bandwidth.
  int nodes_per_panel = 16;
  // Number of correction terms ε^{3-α}, ε^{5-α}, ... in the extrapolation model.
  int extrapolation_order = 2;

  void validate() const;
};

// Truncated fields at one ε, all computed from the same node set.
struct TruncatedFields {
  double eps = 0.0;
  FieldSamples q, r1, r2, h_tilde;
  // Three-term integrand of the gradient before the normal projection.
  FieldSamples h_raw;
};

// Fields for every ε in eps_values (strictly decreasing), sharing nodes between ladder levels.
std::vector<TruncatedFields> truncated_fields(const ClosedCurve& curve, double alpha,
                                              const std::vector<double>& eps_values, int m,
                                              int nodes_per_panel = 16);

FieldSamples q_trunc(const ClosedCurve& curve, double alpha, double eps, int m);
FieldSamples r1_trunc(const ClosedCurve& curve, double alpha, double eps, int m);
FieldSamples r2_trunc(const ClosedCurve& curve, double alpha, double eps, int m);
FieldSamples h_tilde_trunc(const ClosedCurve& curve, double alpha, double eps, int m);

struct Extrapolation {
  FieldSamples field;
  // Sup-norm difference between the order-r and order-(r-1) extrapolants.
  double residual = 0.0;
  bool converged = true;
};

// Pointwise least-squares fit of F(ε) = V + Σ_i a_i ε^{2i+1-α}; returns V.
// A non-converging sequence is flagged and the finest-ε field returned.
Extrapolation extrapolate_eps(const std::vector<FieldSamples>& fields, const std::vector<double>& eps,
                              double alpha, int order = 2);

struct GradientReport {
  FieldSamples h_field, q_field, r1_field, r2_field, h_tilde_field;
  double decomposition_residual = 0.0;
  double eps_used = 0.0;
  bool extrapolated = false;
  double extrapolation_residual = 0.0;
  bool converged = true;
};

// H^α, H̃^α, Q^α, R₁^α, R₂^α of a certified unit-speed simple curve on an m-point grid.
GradientReport gradient_report(const ClosedCurve& curve, double alpha, const TruncationLadder& ladder, int m);
FieldSamples h_alpha_direct(const ClosedCurve& curve, double alpha, const TruncationLadder& ladder, int m);

// Pointwise projections onto the normal space and the tangent line of the curve.
FieldSamples project_normal(const ClosedCurve& curve, const FieldSamples& field);
FieldSamples project_tangent(const ClosedCurve& curve, const FieldSamples& field);

// <Q^{α,ε}γ, γ'> γ' from the triple integral over (s, t, w).
FieldSamples tangent_q_triple(const ClosedCurve& curve, double alpha, double eps, int m, int order = 24);

enum class Remainder { R1, R2 };

// P^⊥R₁^{α,ε} or P^⊥R₂^{α,ε} through the analytic chord/arc kernels g_i and nested averages of γ''.
FieldSamples r_perp_kernel_route(const ClosedCurve& curve, double alpha, double eps, int m, Remainder which,
                                 int order = 16);

// w-panel breakpoints from the smallest ε to 1/2, including every ladder value.
std::vector<double> ladder_breaks(const std::vector<double>& eps_desc, int bandwidth);

}  // namespace knot
