#include "knot/critical_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "knot/spectral.hpp"
#include "knot/special_functions.hpp"

namespace knot {

void FlowConfig::validate() const {
  AlphaParams::checked(alpha);
  if (max_steps < 0) throw ParameterError("flow: max_steps must be nonnegative");
  if (!(step_size > 0.0)) throw ParameterError("flow: step_size must be positive");
  if (!(residual_tol > 0.0)) throw ParameterError("flow: residual_tol must be positive");
  if (modes < 1) throw ParameterError("flow: need at least one mode");
  if (grid < 4 * modes) throw ParameterError("flow: grid must be at least 4 * modes");
  if (!(backtracking > 0.0 && backtracking < 1.0)) throw ParameterError("flow: backtracking must lie in (0, 1)");
  if (!(energy_noise >= 0.0)) throw ParameterError("flow: energy_noise must be nonnegative");
  if (max_retries < 1) throw ParameterError("flow: max_retries must be positive");
  ladder.validate();
  quad.validate();
}

namespace {

FieldSamples second_derivative(const ClosedCurve& curve, int m) { return sample(derivative(curve, 2), m); }

FieldSamples precondition(const FieldSamples& f, double alpha) {
  const int m = f.grid_size();
  Spectrum s = analyze(f, (m - 1) / 2);
  for (int k = -s.modes(); k <= s.modes(); ++k) s.mode(k) /= 1.0 + alpha * q_symbol(k, alpha);
  return synthesize(s, m);
}

FieldSamples axpy(const FieldSamples& x, double a, const FieldSamples& y) {
  return FieldSamples(x.values + a * y.values);
}

double margin_grid(const FlowConfig& config) { return std::min(config.grid, 256); }

double sup_derivative(const FieldSamples& f) {
  const int m = f.grid_size();
  return sup_norm(synthesize(differentiate(analyze(f, (m - 1) / 2), 1), m));
}

}  // namespace

double solve_multiplier(const ClosedCurve& curve, const FieldSamples& h_field) {
  const FieldSamples acc = second_derivative(curve, h_field.grid_size());
  const double denom = l2_inner(acc, acc);
  if (!(denom > 0.0)) throw ParameterError("solve_multiplier: curve has vanishing curvature");
  return -l2_inner(h_field, acc) / denom;
}

FlowState make_state(const ClosedCurve& curve, const FlowConfig& config) {
  config.validate();
  FlowState st;
  st.curve = curve;
  st.h_field = gradient_report(curve, config.alpha, config.ladder, config.grid).h_field;
  st.lambda = solve_multiplier(curve, st.h_field);
  st.residual = l2_norm(axpy(st.h_field, st.lambda, second_derivative(curve, config.grid)));
  EnergyQuadSpec quad = config.quad;
  quad.estimate_error = false;
  st.energy = ohara_energy(curve, config.alpha, quad).value;
  if (!std::isfinite(st.energy)) throw SelfIntersectionError("flow: initial curve is not simple");
  st.step_size = config.step_size;
  return st;
}

FieldSamples descent_direction(const FlowState& state, const FlowConfig& config) {
  const FieldSamples acc = second_derivative(state.curve, config.grid);
  if (!config.preconditioned) return axpy(state.h_field, state.lambda, acc);
  const FieldSamples ph = precondition(state.h_field, config.alpha);
  const FieldSamples pa = precondition(acc, config.alpha);
  const double mu = -l2_inner(acc, ph) / l2_inner(acc, pa);
  return axpy(ph, mu, pa);
}

namespace {

FlowState step_along(const FlowState& state, const FieldSamples& dir, double tau, const FlowConfig& config) {
  const int m = config.grid;
  Eigen::MatrixXd moved = sample(state.curve, m).values - tau * dir.values;
  const ClosedCurve raw = curve_from_samples(moved, config.modes);
  const double len = length(raw, std::max(m, 4 * config.modes));
  FlowState next;
  next.curve = reparametrize_unit_speed(raw, config.modes, config.unit_speed_tol);
  next.length_drift = std::abs(len - 1.0);
  next.step_count = state.step_count + 1;
  next.step_size = tau;
  return next;
}

void evaluate(FlowState& st, const FlowConfig& config) {
  st.h_field = gradient_report(st.curve, config.alpha, config.ladder, config.grid).h_field;
  st.lambda = solve_multiplier(st.curve, st.h_field);
  st.residual = l2_norm(axpy(st.h_field, st.lambda, second_derivative(st.curve, config.grid)));
}

}  // namespace

FlowState trial_step(const FlowState& state, double tau, const FlowConfig& config) {
  config.validate();
  if (!(tau >= 0.0)) throw ParameterError("flow: step must be nonnegative");
  FlowState next = step_along(state, descent_direction(state, config), tau, config);
  EnergyQuadSpec quad = config.quad;
  quad.estimate_error = false;
  next.energy = ohara_energy(next.curve, config.alpha, quad).value;
  evaluate(next, config);
  return next;
}

FlowState flow_step(const FlowState& state, const FlowConfig& config) {
  config.validate();
  const FieldSamples dir = descent_direction(state, config);
  EnergyQuadSpec quad = config.quad;
  quad.estimate_error = false;
  double tau = state.step_size > 0.0 ? state.step_size : config.step_size;
  // Along γ - tτd every chord satisfies |Δγ| >= (margin - tτ sup|d'|)·arc, so keeping τ sup|d'| below the
  // margin rules out a strand passing through another during the step, not only at its end.
  const double margin = simplicity_margin(state.curve, margin_grid(config));
  const double slope = sup_derivative(dir);
  if (slope > 0.0) tau = std::min(tau, 0.5 * margin / slope);
  for (int attempt = 0; attempt < config.max_retries; ++attempt, tau *= config.backtracking) {
    FlowState next;
    try {
      next = step_along(state, dir, tau, config);
    } catch (const ResolutionError&) {
      continue;
    } catch (const SingularParametrizationError&) {
      continue;
    }
    if (!config.length_correction && next.length_drift > 1e-8) continue;
    if (simplicity_margin(next.curve, margin_grid(config)) <= config.min_margin) continue;
    next.energy = ohara_energy(next.curve, config.alpha, quad).value;
    const double band = config.energy_noise * std::abs(state.energy);
    if (!(next.energy <= state.energy + band)) continue;
    evaluate(next, config);
    if (next.energy > state.energy - band && !(next.residual < state.residual)) continue;
    next.step_size = std::min(tau / config.backtracking, config.step_size);
    return next;
  }
  throw ConvergenceError("flow: " + std::to_string(config.max_retries) + " consecutive step rejections at step " +
                         std::to_string(state.step_count + 1));
}

FlowResult run_flow(const ClosedCurve& initial, const FlowConfig& config) {
  config.validate();
  if (!initial.certified()) throw UncertifiedCurveError("flow: initial curve is not certified unit speed");
  if (simplicity_margin(initial, margin_grid(config)) <= 0.0) throw SelfIntersectionError("flow: initial curve is not simple");
  FlowResult out;
  out.state = make_state(initial, config);
  auto record = [&](const FlowState& s) {
    out.trajectory.push_back({s.step_count, s.energy, s.residual, s.lambda, s.length_drift, s.step_size});
  };
  record(out.state);
  while (out.state.residual > config.residual_tol && out.state.step_count < config.max_steps) {
    try {
      out.state = flow_step(out.state, config);
    } catch (const ConvergenceError& e) {
      out.aborted = true;
      out.message = e.what();
      return out;
    }
    record(out.state);
  }
  out.converged = out.state.residual <= config.residual_tol;
  out.message = out.converged ? "converged" : "step limit reached";
  return out;
}

double hausdorff_to_best_circle(const ClosedCurve& curve, int m) {
  if (m < 8) throw ParameterError("hausdorff: need at least 8 points");
  if (curve.dim() < 2) throw ParameterError("hausdorff: curve must live in at least two dimensions");
  const Eigen::MatrixXd p = sample(curve, m).values;
  const Eigen::VectorXd c = p.rowwise().mean();
  const Eigen::MatrixXd u = p.colwise() - c;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(u * u.transpose());
  const int n = curve.dim();
  const Eigen::VectorXd e1 = eig.eigenvectors().col(n - 1), e2 = eig.eigenvectors().col(n - 2);
  double radius = 0.0;
  for (int j = 0; j < m; ++j) radius += std::hypot(u.col(j).dot(e1), u.col(j).dot(e2));
  radius /= m;

  double curve_to_circle = 0.0;
  for (int j = 0; j < m; ++j) {
    const double a = u.col(j).dot(e1), b = u.col(j).dot(e2);
    const double off = std::max(0.0, u.col(j).squaredNorm() - a * a - b * b);
    curve_to_circle = std::max(curve_to_circle, std::sqrt(std::pow(std::hypot(a, b) - radius, 2) + off));
  }
  // Circle points against the polygon through the samples (point-to-segment distance).
  double circle_to_curve = 0.0;
  for (int i = 0; i < m; ++i) {
    const double th = kTwoPi * i / m;
    const Eigen::VectorXd q = c + radius * (std::cos(th) * e1 + std::sin(th) * e2);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd a = p.col(j), seg = p.col((j + 1) % m) - a;
      const double t = std::clamp((q - a).dot(seg) / seg.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (q - a - t * seg).norm());
    }
    circle_to_curve = std::max(circle_to_curve, best);
  }
  return std::max(curve_to_circle, circle_to_curve);
}

}  // namespace knot
