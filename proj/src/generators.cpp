#include "knot/generators.hpp"

#include <cmath>
#include <random>

namespace knot {

namespace {

constexpr double kCertTol = 1e-12;

ClosedCurve from_samples(int dim, int m, int modes, auto&& point) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, m);
  for (int j = 0; j < m; ++j) point(static_cast<double>(j) / m, v.col(j));
  return curve_from_samples(v, modes);
}

void check_dim(int dim) {
  if (dim < 2) throw ParameterError("generator: dimension must be at least 2");
}

}  // namespace

ClosedCurve make_circle(int dim) {
  check_dim(dim);
  Spectrum s(dim, 1);
  s(0, 1) = 1.0 / (4.0 * kPi);
  s(1, 1) = Complex(0.0, -1.0 / (4.0 * kPi));
  s(0, -1) = std::conj(s(0, 1));
  s(1, -1) = std::conj(s(1, 1));
  return ClosedCurve(s, 0.0);
}

ClosedCurve make_bumped_circle(int mode, double amplitude, int modes_out, int dim) {
  check_dim(dim);
  if (mode < 2) throw ParameterError("generator: bump mode must be at least 2");
  if (!(std::abs(amplitude) < 0.5)) throw ParameterError("generator: bump amplitude must be below 1/2");
  const ClosedCurve raw = from_samples(dim, 8 * (mode + 2), mode + 1, [&](double x, auto col) {
    const double r = (1.0 + amplitude * std::cos(kTwoPi * mode * x)) / kTwoPi;
    col(0) = r * std::cos(kTwoPi * x);
    col(1) = r * std::sin(kTwoPi * x);
  });
  return reparametrize_unit_speed(raw, modes_out, kCertTol);
}

ClosedCurve make_perturbed_circle(std::uint64_t seed, double amplitude, int max_mode, int modes_out, int dim) {
  check_dim(dim);
  if (max_mode < 2) throw ParameterError("generator: max_mode must be at least 2");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return 2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0; };
  Spectrum s = make_circle(dim).spectrum().resized(max_mode);
  for (int d = 0; d < dim; ++d)
    for (int k = 2; k <= max_mode; ++k) {
      const double re = uniform();  // draws sequenced explicitly: argument order is unspecified
      Complex c(re, uniform());
      c *= amplitude / (4.0 * kPi * k * k);
      s(d, k) = c;
      s(d, -k) = std::conj(c);
    }
  return reparametrize_unit_speed(ClosedCurve(s), modes_out, kCertTol);
}

ClosedCurve make_random_curve(std::uint64_t seed, int dim, int max_mode) {
  if (dim < 1 || max_mode < 1) throw ParameterError("generator: need dim >= 1 and max_mode >= 1");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return 2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0; };
  Spectrum s(dim, max_mode);
  for (int d = 0; d < dim; ++d) {
    s(d, 0) = uniform();
    for (int k = 1; k <= max_mode; ++k) {
      const double re = uniform() / (k * k);
      const Complex c(re, uniform() / (k * k));
      s(d, k) = c;
      s(d, -k) = std::conj(c);
    }
  }
  return ClosedCurve(s);
}

ClosedCurve make_trefoil(int modes_out, double minor_ratio) {
  if (!(minor_ratio > 0.0 && minor_ratio < 1.0)) throw ParameterError("generator: minor_ratio must lie in (0, 1)");
  const ClosedCurve raw = from_samples(3, 64, 5, [&](double x, auto col) {
    const double t = kTwoPi * x, rho = 1.0 + minor_ratio * std::cos(3.0 * t);
    col(0) = rho * std::cos(2.0 * t);
    col(1) = rho * std::sin(2.0 * t);
    col(2) = minor_ratio * std::sin(3.0 * t);
  });
  return reparametrize_unit_speed(raw, modes_out, kCertTol);
}

}  // namespace knot
