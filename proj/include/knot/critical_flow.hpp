#pragma once

#include <string>
#include <vector>

#include "knot/energy.hpp"
#include "knot/first_variation.hpp"

namespace knot {

struct FlowConfig {
  double alpha = 2.5;
  int max_steps = 500;
  double step_size = 0.5;  // initial τ for the preconditioned direction
  double residual_tol = 1e-4;
  int modes = 64;
  int grid = 512;
  TruncationLadder ladder;
  double backtracking = 0.5;
  // On: every step is rescaled to length 1. Off: steps whose length drift exceeds 1e-8 are rejected instead.
  bool length_correction = true;
  // Direction P(H + μγ̈) with P_k = 1/(1 + α·symbol_k) and μ making it L²-orthogonal to γ̈;
  // false selects the plain L² gradient H + λγ̈.
  bool preconditioned = true;
  double unit_speed_tol = 1e-10;
  int max_retries = 10;
  double min_margin = 1e-3;  // chord/arc ratio below which a step counts as losing simplicity
  // Relative band within which two energy values are indistinguishable from quadrature round-off.
  // A step whose energy change lies inside the band is accepted only if it lowers the residual.
  double energy_noise = 1e-13;
  EnergyQuadSpec quad;

  void validate() const;
};

struct FlowState {
  ClosedCurve curve;
  double lambda = 0.0;
  double energy = 0.0;
  double residual = 0.0;  // ‖H + λγ̈‖_{L²}
  int step_count = 0;
  double step_size = 0.0;
  double length_drift = 0.0;  // |L - 1| of the last step before rescaling
  FieldSamples h_field;   // H^α at the current curve
};

// λ = -∫<H, γ̈> / ∫|γ̈|², making H + λγ̈ L²-orthogonal to γ̈.
double solve_multiplier(const ClosedCurve& curve, const FieldSamples& h_field);

// Gradient, multiplier, residual and energy of a certified unit-speed curve.
FlowState make_state(const ClosedCurve& curve, const FlowConfig& config);

// Descent direction on the grid (before multiplication by -τ).
FieldSamples descent_direction(const FlowState& state, const FlowConfig& config);

// Candidate γ - τ·direction, projected to N modes and reparametrized; no acceptance test.
FlowState trial_step(const FlowState& state, double tau, const FlowConfig& config);

// One accepted descent step with backtracking. The step is capped so that τ·sup|d'| stays below half the
// simplicity margin, which keeps the straight path between the two curves embedded. Throws ConvergenceError after 10 consecutive rejections.
FlowState flow_step(const FlowState& state, const FlowConfig& config);

struct TrajectoryRow {
  int step = 0;
  double energy = 0.0;
  double residual = 0.0;
  double lambda = 0.0;
  double length_drift = 0.0;
  double step_size = 0.0;
};

struct FlowResult {
  FlowState state;
  std::vector<TrajectoryRow> trajectory;
  bool converged = false;
  bool aborted = false;
  std::string message;
};

FlowResult run_flow(const ClosedCurve& initial, const FlowConfig& config);

// Max of the two directed distances between the curve and its best-fit circle (centroid, principal plane,
// mean radius), evaluated on m points of each.
double hausdorff_to_best_circle(const ClosedCurve& curve, int m = 1024);

}  // namespace knot
