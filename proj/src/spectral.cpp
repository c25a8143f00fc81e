#include "knot/spectral.hpp"

#include <cmath>
#include <limits>

#include "knot/special_functions.hpp"

namespace knot {

Spectrum apply_q_multiplier(const Spectrum& spectrum, double alpha) {
  AlphaParams::checked(alpha);
  Spectrum out = spectrum;
  for (int k = -spectrum.modes(); k <= spectrum.modes(); ++k) out.mode(k) *= q_symbol(k, alpha);
  return out;
}

double sobolev_norm(const Spectrum& spectrum, double s) {
  if (!(s >= 0.0)) throw ParameterError("sobolev_norm: s must be nonnegative");
  double sum = 0.0;
  for (int k = -spectrum.modes(); k <= spectrum.modes(); ++k)
    sum += std::pow(1.0 + double(k) * k, s) * spectrum.mode(k).squaredNorm();
  return std::sqrt(sum);
}

Spectrum differentiate(const Spectrum& spectrum, int order) {
  if (order < 0) throw ParameterError("differentiate: negative order");
  Spectrum out = spectrum;
  for (int k = -spectrum.modes(); k <= spectrum.modes(); ++k)
    out.mode(k) *= std::pow(Complex(0.0, kTwoPi * k), order);
  return out;
}

Cor42Result cor42_check(const ClosedCurve& curve, double alpha, int l, double m) {
  AlphaParams::checked(alpha);
  if (l < 0 || !(m >= 0.0)) throw ParameterError("cor42_check: need l >= 0 and m >= 0");
  Cor42Result r;
  const Spectrum& g = curve.spectrum();
  r.lhs = sobolev_norm(differentiate(g, l + 3), m + alpha - 2.0);
  r.rhs = sobolev_norm(differentiate(apply_q_multiplier(g, alpha), l), m);

  const double scale = std::pow(kTwoPi, -6.0) * std::pow(2.0, 2.0 - alpha);
  double qmin = q_infinity(alpha);
  const int kmax = std::max(1024, 4 * g.modes());
  for (int k = 1; k <= kmax; ++k) {
    const double q = q_k(k, alpha);
    if (q < qmin) {
      qmin = q;
      r.argmin_k = k;
    }
  }
  r.constant = 1.0 / std::sqrt(qmin * qmin * scale);
  r.constant_asymptotic = 1.0 / std::sqrt(q_infinity(alpha) * q_infinity(alpha) * scale);
  r.holds = r.lhs <= r.constant * r.rhs * (1.0 + 1e-12);
  return r;
}

std::string to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::Exponential: return "exponential";
    case DecayVerdict::Subexponential: return "subexponential";
    default: return "inconclusive";
  }
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[i];
    b[i] = y[i];
  }
  Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  const double ss_res = (a * c - b).squaredNorm();
  LineFit f;
  f.intercept = c[0];
  f.slope = c[1];
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  return f;
}

}  // namespace

DecayDiagnostics decay_diagnostics(const ClosedCurve& curve, double beta, int cutoff) {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("decay_diagnostics: β must lie in (0, 1)");
  DecayDiagnostics d;
  const Spectrum& s = curve.spectrum();
  const double floor = 1e-13 * s.max_norm();
  // Both signs of k carry the same magnitude for a real curve.
  auto magnitude = [&s](int k) { return std::sqrt(0.5 * (s.mode(k).squaredNorm() + s.mode(-k).squaredNorm())); };
  int last = 0;
  for (int k = 4; k <= s.modes(); ++k)
    if (magnitude(k) > floor) last = k;
  // Analyticity is a statement about limsup |γ̂(k)|^{1/k}: fit the tail envelope sup_{j>=k} |γ̂(j)| over the
  // upper two thirds of the resolved modes, so pre-asymptotic structure and zero modes forced by symmetry
  // do not enter the fit.
  std::vector<double> k_lin, k_log, y;
  const int first = std::max(4, (last + 2) / 3);
  double envelope = 0.0;
  for (int k = last; k >= first; --k) {
    envelope = std::max(envelope, magnitude(k));
    k_lin.push_back(k);
    k_log.push_back(std::log(double(k)));
    y.push_back(std::log(envelope));
  }
  d.fitted_modes = static_cast<int>(y.size());
  if (last == 0 || d.fitted_modes < 6) return d;
  const LineFit lin = fit_line(k_lin, y);
  const LineFit pw = fit_line(k_log, y);
  d.decay_rate = std::max(0.0, -lin.slope);
  d.fit_quality = std::max(0.0, lin.r2);
  d.power_fit_quality = std::max(0.0, pw.r2);

  // For |γ̂(k)| ~ e^{-rk} one has ‖∂^k γ‖ ~ k! (2π/r)^k, so the ratios at r₀ = r/(4π) decay like 2^{-k}.
  d.trial_radius = d.decay_rate / (2.0 * kTwoPi);
  double log_fact = 0.0;
  for (int k = 0; k <= cutoff; ++k) {
    if (k > 0) log_fact += std::log(double(k));
    const double norm = sobolev_norm(differentiate(s, k), 1.0 + beta);
    const double ratio =
        norm > 0.0 && d.trial_radius > 0.0 ? std::exp(std::log(norm) + k * std::log(d.trial_radius) - log_fact) : 0.0;
    d.factorial_ratios.push_back(ratio);
    d.factorial_sup = std::max(d.factorial_sup, ratio);
  }
  // Bounded: the tail of the ratio sequence does not exceed its early maximum.
  double head = 0.0;
  for (int k = 0; k <= cutoff / 2; ++k) head = std::max(head, d.factorial_ratios[k]);
  const bool bounded = std::isfinite(d.factorial_sup) && d.factorial_ratios.back() <= head;

  if (d.decay_rate > 0.0 && d.fit_quality >= 0.99 && d.fit_quality >= d.power_fit_quality && bounded)
    d.verdict = DecayVerdict::Exponential;
  else
    d.verdict = DecayVerdict::Subexponential;
  return d;
}

Spectrum multiply(const Spectrum& f, const Spectrum& g) {
  if (f.dim() != 1 || g.dim() != 1) throw ParameterError("multiply: scalar spectra required");
  const int n = f.modes() + g.modes();
  Spectrum out(1, n);
  for (int a = -f.modes(); a <= f.modes(); ++a)
    for (int b = -g.modes(); b <= g.modes(); ++b) out(0, a + b) += f(0, a) * g(0, b);
  return out;
}

BanachCheck banach_product_check(const Spectrum& f, const Spectrum& g, int m) {
  if (m < 1) throw ParameterError("banach_product_check: m must be >= 1");
  BanachCheck c;
  c.lhs = sobolev_norm(multiply(f, g), m);
  c.rhs = sobolev_norm(f, m) * sobolev_norm(g, m);
  return c;
}

}  // namespace knot
