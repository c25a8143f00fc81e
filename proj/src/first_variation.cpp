#include "knot/first_variation.hpp"

#include <algorithm>
#include <cmath>

#include "knot/chord.hpp"
#include "knot/quadrature.hpp"
#include "knot/special_functions.hpp"

namespace knot {

void TruncationLadder::validate() const {
  if (eps_values.empty()) throw ParameterError("ladder: no ε values");
  for (size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > 0.0 && eps_values[i] <= 0.5)) throw ParameterError("ladder: ε must lie in (0, 1/2]");
    if (i > 0 && !(eps_values[i] < eps_values[i - 1])) throw ParameterError("ladder: ε must be strictly decreasing");
  }
  if (nodes_per_panel < 16) throw ParameterError("ladder: at least 16 nodes per panel");
  if (extrapolation_order < 0) throw ParameterError("ladder: negative extrapolation order");
}

std::vector<double> ladder_breaks(const std::vector<double>& eps_desc, int bandwidth) {
  const double hmax = 1.27 / std::max(bandwidth, 1);
  std::vector<double> b;
  auto append = [&b](const std::vector<double>& seg) {
    for (double v : seg)
      if (b.empty() || v > b.back()) b.push_back(v);
  };
  for (size_t j = eps_desc.size() - 1; j >= 1; --j) append(geometric_breaks(eps_desc[j], eps_desc[j - 1], 2.0, hmax));
  if (eps_desc.front() < 0.5) append(geometric_breaks(eps_desc.front(), 0.5, 2.0, hmax));
  if (b.size() == 1) b.push_back(0.5);
  return b;
}

namespace {

void check_alpha(double alpha) { AlphaParams::checked(alpha); }

using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Accumulators are kept in extended precision: the contributions at +w and -w share a large odd part
// that cancels in the sum.
struct Accum {
  MatrixXl q, r1, r2, ht, hr;
  void zero(int dim, int m) {
    q.setZero(dim, m);
    r1.setZero(dim, m);
    r2.setZero(dim, m);
    ht.setZero(dim, m);
    hr.setZero(dim, m);
  }
  void add(const Accum& o) {
    q += o.q;
    r1 += o.r1;
    r2 += o.r2;
    ht += o.ht;
    hr += o.hr;
  }
};

// Adds weight × integrand at offset ws (signed) to acc. The Taylor remainder at ws is even + sign(ws)·odd.
void accumulate_node(const ChordSampler& cs, double alpha, double ws, double weight, const Eigen::MatrixXd& even,
                     const Eigen::MatrixXd& odd, Accum& acc) {
  const Eigen::MatrixXd& T = cs.velocity();
  const Eigen::MatrixXd& A = cs.acceleration();
  const int m = cs.grid_size();
  const int dim = cs.dim();
  const double w = std::abs(ws);
  const long double sign = ws > 0.0 ? 1.0L : -1.0L;
  const long double wl = ws, weight_l = weight, alpha_l = alpha;
  const long double w2l = wl * wl, pl = 0.5L * alpha_l;
  const long double wa_l = std::pow(static_cast<long double>(w), alpha_l);
  std::vector<long double> ql(dim), cl(dim), dl(dim);

  for (int j = 0; j < m; ++j) {
    long double c2l = 0.0L, t_aq = 0.0L, aq2 = 0.0L, t2 = 0.0L;
    for (int i = 0; i < dim; ++i) {
      ql[i] = even(i, j) + sign * odd(i, j);
      const long double aq = A(i, j) + ql[i];
      dl[i] = 0.5L * wl * wl * aq;
      cl[i] = wl * T(i, j) + dl[i];
      c2l += cl[i] * cl[i];
      t_aq += T(i, j) * aq;
      aq2 += aq * aq;
      t2 += static_cast<long double>(T(i, j)) * T(i, j);
    }
    // Every summand below cancels terms of size w^{-α} |γ''| against its neighbours (between the two
    // parts of H~, between +w and -w, and inside e ~ w²κ²), so the node is evaluated in extended
    // precision from the double inputs.
    const long double ica_l = std::pow(c2l, -pl);
    const long double kd_l = weight_l * 2.0L * alpha_l * ica_l / c2l;
    const long double ka_l = weight_l * ((alpha_l - 2.0L) / wa_l + 2.0L * ica_l);

    // e = 1 - |c|²/w², expanded so that the O(1) terms cancel symbolically. When the chord is much
    // shorter than the arc (near approaches) the direct ratio u² = |c|²/w² is the accurate one.
    const long double u2 = c2l / w2l;
    long double e, ome, omp, ua;
    if (u2 < 0.5L) {
      e = 1.0L - u2;
      ome = u2;
      ua = std::pow(u2, pl);
      omp = 1.0L - ua;
    } else {
      e = (1.0L - t2) - wl * t_aq - 0.25L * w2l * aq2;
      ome = 1.0L - e;
      omp = -std::expm1(pl * std::log1p(-e));  // 1 - u^α
      ua = 1.0L - omp;                          // u^α
    }
    const long double omp2 = omp + ua * e;                            // 1 - u^{α+2}
    const long double k_r2 = weight_l * omp / (ua * wa_l);            // 1/|c|^α - 1/|w|^α
    const long double k_r1 = weight_l * omp2 / (ua * ome * wa_l * w2l);  // 1/|c|^{α+2} - 1/|w|^{α+2}

    for (int i = 0; i < dim; ++i) {
      acc.q(i, j) += weight_l / wa_l * ql[i];
      acc.r1(i, j) += dl[i] * k_r1;
      acc.r2(i, j) += A(i, j) * k_r2;
      acc.ht(i, j) += dl[i] * kd_l - A(i, j) * ka_l;
      acc.hr(i, j) += cl[i] * kd_l - A(i, j) * ka_l;
    }
  }
}

}  // namespace

std::vector<TruncatedFields> truncated_fields(const ClosedCurve& curve, double alpha,
                                              const std::vector<double>& eps_values, int m, int nodes_per_panel) {
  check_alpha(alpha);
  TruncationLadder probe;
  probe.eps_values = eps_values;
  probe.nodes_per_panel = std::max(nodes_per_panel, 16);
  probe.validate();

  ChordSampler cs(curve, m);
  const int dim = curve.dim();
  const std::vector<double> breaks = ladder_breaks(eps_values, effective_bandwidth(curve.spectrum()));
  const QuadratureRule& ref = gauss_legendre(nodes_per_panel);

  std::vector<TruncatedFields> out;
  Accum total, panel;
  total.zero(dim, m);
  Eigen::MatrixXd even, odd;
  size_t next = 0;
  for (int i = static_cast<int>(breaks.size()) - 2; i >= 0; --i) {
    const double a = breaks[i], b = breaks[i + 1];
    panel.zero(dim, m);
    for (int n = 0; n < ref.nodes.size(); ++n) {
      const double w = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[n];
      const double weight = 0.5 * (b - a) * ref.weights[n];
      cs.remainder_parts(w, even, odd);
      accumulate_node(cs, alpha, w, weight, even, odd, panel);
      accumulate_node(cs, alpha, -w, weight, even, odd, panel);
    }
    total.add(panel);
    while (next < eps_values.size() && a <= eps_values[next]) {
      TruncatedFields f;
      f.eps = eps_values[next];
      f.q = FieldSamples(total.q.cast<double>());
      f.r1 = FieldSamples(total.r1.cast<double>());
      f.r2 = FieldSamples(total.r2.cast<double>());
      f.h_tilde = FieldSamples(total.ht.cast<double>());
      f.h_raw = FieldSamples(total.hr.cast<double>());
      out.push_back(std::move(f));
      ++next;
    }
  }
  return out;
}

FieldSamples q_trunc(const ClosedCurve& curve, double alpha, double eps, int m) {
  return truncated_fields(curve, alpha, {eps}, m).front().q;
}
FieldSamples r1_trunc(const ClosedCurve& curve, double alpha, double eps, int m) {
  return truncated_fields(curve, alpha, {eps}, m).front().r1;
}
FieldSamples r2_trunc(const ClosedCurve& curve, double alpha, double eps, int m) {
  return truncated_fields(curve, alpha, {eps}, m).front().r2;
}
FieldSamples h_tilde_trunc(const ClosedCurve& curve, double alpha, double eps, int m) {
  return truncated_fields(curve, alpha, {eps}, m).front().h_tilde;
}

namespace {

// Row vector c with V ≈ Σ_j c_j F_j for the model F(ε) = V + Σ_{i=1}^{order} a_i ε^{2i+1-α}.
Eigen::VectorXd extrapolation_weights(const std::vector<double>& eps, double alpha, int order) {
  const int n = static_cast<int>(eps.size());
  Eigen::MatrixXd X(n, order + 1);
  for (int j = 0; j < n; ++j) {
    X(j, 0) = 1.0;
    for (int i = 1; i <= order; ++i) X(j, i) = std::pow(eps[j] / eps.front(), 2.0 * i + 1.0 - alpha);
  }
  Eigen::MatrixXd pinv = X.completeOrthogonalDecomposition().pseudoInverse();
  return pinv.row(0).transpose();
}

}  // namespace

Extrapolation extrapolate_eps(const std::vector<FieldSamples>& fields, const std::vector<double>& eps, double alpha,
                              int order) {
  if (fields.size() != eps.size() || fields.empty()) throw ParameterError("extrapolate_eps: size mismatch");
  for (const auto& f : fields)
    if (f.values.rows() != fields[0].values.rows() || f.values.cols() != fields[0].values.cols())
      throw GridMismatchError("extrapolate_eps: fields on different grids");
  if (fields.size() < 3) throw ParameterError("extrapolate_eps: need at least 3 ladder points");
  const int n = static_cast<int>(fields.size());
  order = std::min(order, n - 1);
  Extrapolation out;
  if (order <= 0) {
    out.field = fields.back();
    return out;
  }
  auto combine = [&](const Eigen::VectorXd& c) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(fields[0].values.rows(), fields[0].values.cols());
    for (int j = 0; j < n; ++j) v += c[j] * fields[j].values;
    return v;
  };
  const Eigen::MatrixXd hi = combine(extrapolation_weights(eps, alpha, order));
  const Eigen::MatrixXd lo = combine(extrapolation_weights(eps, alpha, order - 1));
  out.residual = sup_norm(FieldSamples(hi - lo));
  const double correction = sup_norm(FieldSamples(hi - fields.back().values));
  const double scale = sup_norm(FieldSamples(hi));
  out.converged = out.residual <= 0.1 * correction || out.residual <= 1e-12 * (1.0 + scale);
  out.field = out.converged ? FieldSamples(hi) : fields.back();
  return out;
}

FieldSamples project_normal(const ClosedCurve& curve, const FieldSamples& field) {
  FieldSamples t = project_tangent(curve, field);
  return FieldSamples(field.values - t.values);
}

FieldSamples project_tangent(const ClosedCurve& curve, const FieldSamples& field) {
  if (field.dim() != curve.dim()) throw GridMismatchError("projection: dimension mismatch");
  FieldSamples v = sample(derivative(curve, 1), field.grid_size());
  Eigen::MatrixXd out(field.dim(), field.grid_size());
  for (int j = 0; j < field.grid_size(); ++j) {
    const Eigen::VectorXd t = v.values.col(j).normalized();
    out.col(j) = t.dot(field.values.col(j)) * t;
  }
  return FieldSamples(std::move(out));
}

GradientReport gradient_report(const ClosedCurve& curve, double alpha, const TruncationLadder& ladder, int m) {
  check_alpha(alpha);
  ladder.validate();
  if (!curve.certified()) throw UncertifiedCurveError("gradient: curve is not certified unit speed");
  if (simplicity_margin(curve, m) <= 1e-8) throw SelfIntersectionError("gradient: curve is not simple");

  std::vector<TruncatedFields> t = truncated_fields(curve, alpha, ladder.eps_values, m, ladder.nodes_per_panel);
  GradientReport r;
  for (const auto& f : t) {
    Eigen::MatrixXd res = alpha * f.q.values + 2.0 * alpha * f.r1.values - 2.0 * f.r2.values - f.h_tilde.values;
    r.decomposition_residual = std::max(r.decomposition_residual, sup_norm(FieldSamples(res)));
  }
  r.eps_used = ladder.eps_values.back();
  auto pick = [&](auto member) {
    std::vector<FieldSamples> v;
    for (const auto& f : t) v.push_back(f.*member);
    return v;
  };
  if (t.size() >= 3 && ladder.extrapolation_order > 0) {
    r.extrapolated = true;
    auto run = [&](auto member) {
      Extrapolation e = extrapolate_eps(pick(member), ladder.eps_values, alpha, ladder.extrapolation_order);
      r.converged = r.converged && e.converged;
      return e;
    };
    Extrapolation h = run(&TruncatedFields::h_raw);
    r.extrapolation_residual = h.residual;
    r.h_field = project_normal(curve, h.field);
    r.q_field = run(&TruncatedFields::q).field;
    r.r1_field = run(&TruncatedFields::r1).field;
    r.r2_field = run(&TruncatedFields::r2).field;
    r.h_tilde_field = run(&TruncatedFields::h_tilde).field;
  } else {
    const TruncatedFields& f = t.back();
    r.h_field = project_normal(curve, f.h_raw);
    r.q_field = f.q;
    r.r1_field = f.r1;
    r.r2_field = f.r2;
    r.h_tilde_field = f.h_tilde;
  }
  return r;
}

FieldSamples h_alpha_direct(const ClosedCurve& curve, double alpha, const TruncationLadder& ladder, int m) {
  return gradient_report(curve, alpha, ladder, m).h_field;
}

FieldSamples tangent_q_triple(const ClosedCurve& curve, double alpha, double eps, int m, int order) {
  check_alpha(alpha);
  if (!(eps > 0.0 && eps <= 0.5)) throw ParameterError("tangent_q_triple: ε must lie in (0, 1/2]");
  ChordSampler cs(curve, m);
  const Eigen::MatrixXcd acc = derivative(curve, 2).spectrum().resized(curve.modes()).coeffs();
  const std::vector<double> breaks = ladder_breaks({eps}, effective_bandwidth(curve.spectrum()));
  const QuadratureRule& ref = gauss_legendre(16);
  const QuadratureRule unit = gauss_legendre(order, 0.0, 1.0);

  Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(m);
  Eigen::MatrixXd at_p, at_m, as_p, as_m;
  for (int i = static_cast<int>(breaks.size()) - 2; i >= 0; --i) {
    const double a = breaks[i], b = breaks[i + 1];
    Eigen::RowVectorXd panel = Eigen::RowVectorXd::Zero(m);
    for (int n = 0; n < ref.nodes.size(); ++n) {
      const double w = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[n];
      const double ww = 0.5 * (b - a) * ref.weights[n] / (w * std::pow(w, alpha - 2.0));
      for (int it = 0; it < unit.nodes.size(); ++it) {
        const double t = unit.nodes[it];
        cs.shifted(acc, t * w, at_p, at_m);
        Eigen::MatrixXd inner_p = Eigen::MatrixXd::Zero(curve.dim(), m), inner_m = inner_p;
        for (int is = 0; is < unit.nodes.size(); ++is) {
          cs.shifted(acc, unit.nodes[is] * t * w, as_p, as_m);
          inner_p += unit.weights[is] * as_p;
          inner_m += unit.weights[is] * as_m;
        }
        // Odd kernel 1/(w|w|^{α-2}): the -w branch enters with a minus sign.
        const Eigen::RowVectorXd dots =
            at_p.cwiseProduct(inner_p).colwise().sum() - at_m.cwiseProduct(inner_m).colwise().sum();
        panel += (unit.weights[it] * (1.0 - t) * (-t) * ww) * dots;
      }
    }
    total += panel;
  }
  FieldSamples v = sample(derivative(curve, 1), m);
  Eigen::MatrixXd out(curve.dim(), m);
  for (int j = 0; j < m; ++j) out.col(j) = 2.0 * total[j] * v.values.col(j);
  return FieldSamples(std::move(out));
}

FieldSamples r_perp_kernel_route(const ClosedCurve& curve, double alpha, double eps, int m, Remainder which,
                                 int order) {
  check_alpha(alpha);
  if (!(eps > 0.0 && eps <= 0.5)) throw ParameterError("r_perp_kernel_route: ε must lie in (0, 1/2]");
  if (simplicity_margin(curve, m) <= 1e-8) throw SelfIntersectionError("r_perp_kernel_route: curve is not simple");
  ChordSampler cs(curve, m);
  const int dim = curve.dim();
  const Eigen::MatrixXcd vel = derivative(curve, 1).spectrum().resized(curve.modes()).coeffs();
  const Eigen::MatrixXcd acc = derivative(curve, 2).spectrum().resized(curve.modes()).coeffs();
  const std::vector<double> breaks = ladder_breaks({eps}, effective_bandwidth(curve.spectrum()));
  const QuadratureRule& ref = gauss_legendre(16);
  const QuadratureRule unit = gauss_legendre(order, 0.0, 1.0);
  const int p = order;
  const double s = (which == Remainder::R1) ? alpha + 2.0 : alpha;

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(dim, m);
  Eigen::MatrixXd fp, fm;
  for (int i = static_cast<int>(breaks.size()) - 2; i >= 0; --i) {
    const double a = breaks[i], b = breaks[i + 1];
    Eigen::MatrixXd panel = Eigen::MatrixXd::Zero(dim, m);
    for (int n = 0; n < ref.nodes.size(); ++n) {
      const double w = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[n];
      const double weight = 0.5 * (b - a) * ref.weights[n] * std::pow(w, 2.0 - alpha);
      // Chord/arc ratio u = |∫_0^1 γ'(x+tw) dt| and, for R₁, B = ∫_0^1 (1-t) γ''(x+tw) dt.
      Eigen::MatrixXd mean_p = Eigen::MatrixXd::Zero(dim, m), mean_m = mean_p;
      Eigen::MatrixXd b_p = mean_p, b_m = mean_p;
      for (int it = 0; it < p; ++it) {
        cs.shifted(vel, unit.nodes[it] * w, fp, fm);
        mean_p += unit.weights[it] * fp;
        mean_m += unit.weights[it] * fm;
        if (which == Remainder::R1) {
          cs.shifted(acc, unit.nodes[it] * w, fp, fm);
          b_p += unit.weights[it] * (1.0 - unit.nodes[it]) * fp;
          b_m += unit.weights[it] * (1.0 - unit.nodes[it]) * fm;
        }
      }
      // S₂ = ∫∫ (s1-s2)² |∫_0^1 γ''(x + (s2 + (s1-s2)φ)w) dφ|² ds1 ds2, symmetric in (s1, s2).
      Eigen::RowVectorXd s2_p = Eigen::RowVectorXd::Zero(m), s2_m = s2_p;
      for (int i1 = 0; i1 < p; ++i1) {
        for (int i2 = 0; i2 < i1; ++i2) {
          const double s1 = unit.nodes[i1], s2 = unit.nodes[i2];
          Eigen::MatrixXd in_p = Eigen::MatrixXd::Zero(dim, m), in_m = in_p;
          for (int k = 0; k < p; ++k) {
            cs.shifted(acc, (s2 + (s1 - s2) * unit.nodes[k]) * w, fp, fm);
            in_p += unit.weights[k] * fp;
            in_m += unit.weights[k] * fm;
          }
          const double ww = 2.0 * unit.weights[i1] * unit.weights[i2] * (s1 - s2) * (s1 - s2);
          s2_p += ww * in_p.colwise().squaredNorm();
          s2_m += ww * in_m.colwise().squaredNorm();
        }
      }
      for (int j = 0; j < m; ++j) {
        const double gp = g_kernel(s, mean_p.col(j).norm()), gm = g_kernel(s, mean_m.col(j).norm());
        if (which == Remainder::R1)
          panel.col(j) += weight * (gp * s2_p[j] * b_p.col(j) + gm * s2_m[j] * b_m.col(j));
        else
          panel.col(j) += weight * (gp * s2_p[j] + gm * s2_m[j]) * cs.acceleration().col(j);
      }
    }
    total += panel;
  }
  return project_normal(curve, FieldSamples(std::move(total)));
}

}  // namespace knot
