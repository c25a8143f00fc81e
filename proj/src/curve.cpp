#include "knot/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace knot {

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

// i^r (2πk)^r
Complex derivative_factor(int k, int order) {
  static const Complex powers_of_i[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  return powers_of_i[order % 4] * std::pow(kTwoPi * k, order);
}

}  // namespace

ClosedCurve::ClosedCurve(Spectrum spectrum, std::optional<double> unit_speed_tol)
    : spectrum_(std::move(spectrum)), unit_speed_tol_(unit_speed_tol) {
  if (spectrum_.dim() < 2) throw ParameterError("ClosedCurve: ambient dimension must be at least 2");
  if (spectrum_.reality_defect() > 1e-10) throw ParameterError("ClosedCurve: coefficients are not Hermitian");
  if (unit_speed_tol_ && !(*unit_speed_tol_ >= 0.0)) throw ParameterError("ClosedCurve: negative unit-speed tolerance");
  spectrum_.symmetrize();
  const double cutoff = 1e-14 * spectrum_.max_norm();
  int n = spectrum_.modes();
  while (n > 0 && spectrum_.mode(n).norm() <= cutoff && spectrum_.mode(-n).norm() <= cutoff) --n;
  if (n < spectrum_.modes()) spectrum_ = spectrum_.resized(n);
}

Eigen::VectorXd ClosedCurve::evaluate(double x, int order) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim());
  if (order == 0) v = spectrum_.mode(0).real();
  const Complex z = std::polar(1.0, kTwoPi * x);
  Complex zk = 1.0;
  for (int k = 1; k <= modes(); ++k) {
    zk = (k % 16 == 0) ? std::polar(1.0, kTwoPi * k * x) : zk * z;
    const Complex f = derivative_factor(k, order) * zk;
    v += 2.0 * (spectrum_.mode(k) * f).real();
  }
  return v;
}

FieldSamples sample(const ClosedCurve& curve, int m) { return synthesize(curve.spectrum(), m); }

ClosedCurve derivative(const ClosedCurve& curve, int order) {
  if (order < 0) throw ParameterError("derivative: order must be nonnegative");
  Spectrum s = curve.spectrum();
  for (int k = -s.modes(); k <= s.modes(); ++k) s.mode(k) *= derivative_factor(k, order);
  if (order > 0) s.mode(0).setZero();
  return ClosedCurve(std::move(s));
}

double length(const ClosedCurve& curve, int m) {
  FieldSamples v = sample(derivative(curve, 1), m);
  return v.values.colwise().norm().sum() / m;
}

ClosedCurve combine(double a, const ClosedCurve& gamma, double b, const ClosedCurve& h) {
  if (gamma.dim() != h.dim()) throw ParameterError("combine: dimensions differ");
  const int n = std::max(gamma.modes(), h.modes());
  Spectrum s = gamma.spectrum().resized(n);
  s.coeffs() *= a;
  s.coeffs() += b * h.spectrum().resized(n).coeffs();
  return ClosedCurve(std::move(s));
}

ClosedCurve scale(const ClosedCurve& curve, double factor) {
  Spectrum s = curve.spectrum();
  s.coeffs() *= factor;
  return ClosedCurve(std::move(s));
}

ArcLength::ArcLength(const ClosedCurve& curve, int grid) {
  FieldSamples v = sample(derivative(curve, 1), grid);
  Eigen::MatrixXd speed = v.values.colwise().norm();
  min_speed_ = speed.minCoeff();
  GridTransform t(grid);
  speed_ = Spectrum(t.analyze(speed, (grid - 1) / 2));
  speed_.symmetrize();
  total_ = speed_(0, 0).real();
  // Drop the negligible tail to keep pointwise evaluation cheap.
  int n = speed_.modes();
  while (n > 0 && std::abs(speed_(0, n)) <= 1e-17 * total_) --n;
  speed_ = speed_.resized(n);
}

double ArcLength::operator()(double x) const {
  double s = total_ * x;
  const Complex z = std::polar(1.0, kTwoPi * x);
  Complex zk = 1.0;
  for (int k = 1; k <= speed_.modes(); ++k) {
    zk = (k % 16 == 0) ? std::polar(1.0, kTwoPi * k * x) : zk * z;
    s += 2.0 * (speed_(0, k) * (zk - 1.0) / Complex(0.0, kTwoPi * k)).real();
  }
  return s;
}

double ArcLength::speed(double x) const {
  double s = total_;
  const Complex z = std::polar(1.0, kTwoPi * x);
  Complex zk = 1.0;
  for (int k = 1; k <= speed_.modes(); ++k) {
    zk = (k % 16 == 0) ? std::polar(1.0, kTwoPi * k * x) : zk * z;
    s += 2.0 * (speed_(0, k) * zk).real();
  }
  return s;
}

double speed_deviation(const ClosedCurve& curve, int grid) {
  FieldSamples v = sample(derivative(curve, 1), grid);
  return (v.values.colwise().norm().array() - 1.0).abs().maxCoeff();
}

ClosedCurve resample_constant_speed(const ClosedCurve& curve, int modes_out, double& length_out) {
  const int grid = next_pow2(std::max(8 * std::max(curve.modes(), modes_out), 256));
  ArcLength s(curve, grid);
  const double total = s.total();
  if (!(s.min_speed() > 1e-10 * total))
    throw SingularParametrizationError("reparametrize: speed vanishes on the sample grid");

  Eigen::MatrixXd values(curve.dim(), grid);
  double lo = 0.0, x = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double target = total * j / grid;
    double a = lo, b = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double f = s(x) - target;
      if (std::abs(f) <= 4e-16 * total) break;
      if (f > 0.0) b = std::min(b, x); else a = std::max(a, x);
      double next = x - f / s.speed(x);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - x) < 1e-17) {
        x = next;
        break;
      }
      x = next;
    }
    values.col(j) = curve.evaluate(x);
    lo = x;
    x += (total / grid) / s.speed(x);
  }
  length_out = total;
  return curve_from_samples(values, modes_out);
}

ClosedCurve reparametrize_unit_speed(const ClosedCurve& curve, int modes_out, double tol,
                                     const ReparamOptions& options) {
  if (modes_out < 1) throw ParameterError("reparametrize: need at least one mode");
  const int cert = std::max(options.certification_grid, next_pow2(8 * modes_out));
  ClosedCurve current = curve;
  double best_dev = std::numeric_limits<double>::infinity(), previous = best_dev;
  for (int it = 0; it < options.max_iterations; ++it) {
    double total = 0.0;
    ClosedCurve g = resample_constant_speed(current, modes_out, total);
    g = scale(g, 1.0 / total);
    const double dev = speed_deviation(g, cert);
    best_dev = std::min(best_dev, dev);
    if (dev <= tol) return ClosedCurve(g.spectrum(), dev);
    if (dev > 0.5 * previous) break;
    previous = dev;
    current = g;
  }
  throw ResolutionError("reparametrize: unit speed not reachable with " + std::to_string(modes_out) + " modes",
                        best_dev);
}

double intrinsic_distance(const ClosedCurve& curve, double x, double y) {
  if (!curve.certified()) throw UncertifiedCurveError("intrinsic_distance: curve is not certified unit speed");
  double d = std::fmod(std::abs(x - y), 1.0);
  return std::min(d, 1.0 - d);
}

double simplicity_margin(const ClosedCurve& curve, int m) {
  FieldSamples p = sample(curve, m);
  ArcLength s(curve, next_pow2(std::max(8 * curve.modes(), 256)));
  const double total = s.total();
  std::vector<double> arc(m);
  for (int j = 0; j < m; ++j) arc[j] = s(static_cast<double>(j) / m);
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = arc[j] - arc[i];
      const double dist = std::min(d, total - d);
      if (dist <= 0.0) return 0.0;
      margin = std::min(margin, (p.values.col(i) - p.values.col(j)).norm() / dist);
    }
  }
  return margin;
}

ClosedCurve curve_from_samples(const Eigen::MatrixXd& values, int modes) {
  GridTransform t(static_cast<int>(values.cols()));
  Spectrum s(t.analyze(values, modes));
  s.symmetrize();
  return ClosedCurve(std::move(s));
}

}  // namespace knot
