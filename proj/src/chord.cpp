#include "knot/chord.hpp"

#include <cmath>

namespace knot {

double one_minus_power(double e, double p) {
  if (std::abs(e) < 1e-6) return p * e - p * (p - 1.0) * e * e / 2.0 + p * (p - 1.0) * (p - 2.0) * e * e * e / 6.0;
  return -std::expm1(p * std::log1p(-e));
}

double g_kernel(double s, double u) {
  const double e = 1.0 - u * u;
  const double p = 0.5 * s;
  double ratio;  // (1 - u^s) / (1 - u²)
  if (std::abs(1.0 - u) < 1e-6)
    ratio = p - p * (p - 1.0) * e / 2.0 + p * (p - 1.0) * (p - 2.0) * e * e / 6.0;
  else
    ratio = one_minus_power(e, p) / e;
  return ratio / (2.0 * std::pow(u, s));
}

int effective_bandwidth(const Spectrum& s, double rel) {
  const double cut = rel * s.max_norm();
  for (int k = s.modes(); k > 0; --k)
    if (s.mode(k).norm() > cut || s.mode(-k).norm() > cut) return k;
  return 0;
}

std::vector<double> geometric_breaks(double lo, double hi, double ratio, double max_width) {
  std::vector<double> b{lo};
  if (!(hi > lo)) return b;
  const int n = std::max(1, static_cast<int>(std::ceil(std::log(hi / lo) / std::log(ratio) - 1e-12)));
  const double r = std::pow(hi / lo, 1.0 / n);
  double prev = lo;
  for (int i = 1; i <= n; ++i) {
    const double next = (i == n) ? hi : lo * std::pow(r, i);
    const int pieces = std::max(1, static_cast<int>(std::ceil((next - prev) / max_width - 1e-12)));
    for (int j = 1; j <= pieces; ++j) b.push_back(j == pieces ? next : prev + (next - prev) * j / pieces);
    prev = next;
  }
  return b;
}

Complex exp_remainder3(double theta) {
  if (std::abs(theta) > 2.0)
    return Complex(std::cos(theta) - 1.0 + 0.5 * theta * theta, std::sin(theta) - theta);
  const Complex it(0.0, theta);
  Complex term = it * it * it / 6.0, sum = 0.0;
  for (int j = 3; j < 40; ++j) {
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    term *= it / static_cast<double>(j + 1);
  }
  return sum;
}

Complex mean_remainder(double theta) {
  if (std::abs(theta) > 2.0) return (std::polar(1.0, theta) - 1.0) / Complex(0.0, theta) - 1.0;
  const Complex it(0.0, theta);
  Complex term = it / 2.0, sum = 0.0;
  for (int j = 1; j < 40; ++j) {
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    term *= it / static_cast<double>(j + 2);
  }
  return sum;
}

ChordSampler::ChordSampler(const ClosedCurve& curve, int m)
    : m_(m), dim_(curve.dim()), modes_(curve.modes()), coeffs_(curve.coeffs()), transform_(m) {
  pos_ = transform_.synthesize(coeffs_);
  vel_ = transform_.synthesize(derivative(curve, 1).spectrum().resized(modes_).coeffs());
  acc_ = transform_.synthesize(derivative(curve, 2).spectrum().resized(modes_).coeffs());
  work_a_.resize(dim_, 2 * modes_ + 1);
  work_b_.resize(dim_, 2 * modes_ + 1);
}

void ChordSampler::remainder(double w, Eigen::MatrixXd& plus, Eigen::MatrixXd& minus) const {
  const double scale = 2.0 / (w * w);
  for (int k = -modes_; k <= modes_; ++k) {
    const Complex f = scale * exp_remainder3(kTwoPi * k * w);
    work_a_.col(k + modes_) = coeffs_.col(k + modes_) * f;
    work_b_.col(k + modes_) = coeffs_.col(k + modes_) * std::conj(f);
  }
  transform_.synthesize_pair(work_a_, work_b_, plus, minus);
}

void ChordSampler::remainder_parts(double w, Eigen::MatrixXd& even, Eigen::MatrixXd& odd) const {
  const double scale = 2.0 / (w * w);
  for (int k = -modes_; k <= modes_; ++k) {
    const Complex f = scale * exp_remainder3(kTwoPi * k * w);
    work_a_.col(k + modes_) = coeffs_.col(k + modes_) * f.real();
    work_b_.col(k + modes_) = coeffs_.col(k + modes_) * Complex(0.0, f.imag());
  }
  transform_.synthesize_pair(work_a_, work_b_, even, odd);
}

void ChordSampler::shifted(const Eigen::MatrixXcd& coeffs, double s, Eigen::MatrixXd& plus,
                           Eigen::MatrixXd& minus) const {
  const int n = static_cast<int>(coeffs.cols() - 1) / 2;
  Eigen::MatrixXcd a(coeffs.rows(), coeffs.cols()), b(coeffs.rows(), coeffs.cols());
  for (int k = -n; k <= n; ++k) {
    const Complex f = std::polar(1.0, kTwoPi * k * s);
    a.col(k + n) = coeffs.col(k + n) * f;
    b.col(k + n) = coeffs.col(k + n) * std::conj(f);
  }
  transform_.synthesize_pair(a, b, plus, minus);
}

}  // namespace knot
