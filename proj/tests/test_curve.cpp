#include <cmath>

#include <gtest/gtest.h>

#include "knot/curve.hpp"
#include "knot/quadrature.hpp"
#include "test_helpers.hpp"

using namespace knot;
using knot::testing::circle_curve;
using knot::testing::random_curve;
using knot::testing::Rng;

namespace {

ClosedCurve ellipse(double a, double b) {
  Spectrum s(2, 1);
  s(0, 1) = a / 2;
  s(0, -1) = a / 2;
  s(1, 1) = Complex(0, -b / 2);
  s(1, -1) = Complex(0, b / 2);
  return ClosedCurve(s);
}

// Circle traversed with a non-uniform speed, γ(x) = r(cos 2πφ, sin 2πφ), φ = x + 0.1 sin(2πx)/(2π).
ClosedCurve warped_circle() {
  const int m = 512;
  Eigen::MatrixXd v(3, m);
  for (int j = 0; j < m; ++j) {
    double x = double(j) / m;
    double phi = x + 0.1 * std::sin(kTwoPi * x) / kTwoPi;
    v(0, j) = std::cos(kTwoPi * phi) / kTwoPi;
    v(1, j) = std::sin(kTwoPi * phi) / kTwoPi;
    v(2, j) = 0.0;
  }
  return curve_from_samples(v, 100);
}

ClosedCurve figure_eight() {
  Spectrum s(2, 2);
  s(0, 1) = Complex(0, -0.5);
  s(0, -1) = Complex(0, 0.5);
  s(1, 2) = Complex(0, -0.25);
  s(1, -2) = Complex(0, 0.25);
  return ClosedCurve(s);
}

}  // namespace

TEST(ClosedCurve, RejectsNonHermitianCoefficients) {
  Spectrum s(2, 1);
  s(0, 1) = 1.0;
  EXPECT_THROW(ClosedCurve{s}, ParameterError);
}

TEST(ClosedCurve, TrimsTrailingModes) {
  Spectrum s = circle_curve().spectrum().resized(5);
  ClosedCurve c(s);
  EXPECT_EQ(c.modes(), 1);
}

TEST(Sample, ConstantCurve) {
  Spectrum s(3, 0);
  s(0, 0) = 1.5;
  s(2, 0) = -2.0;
  FieldSamples f = sample(ClosedCurve(s), 7);
  for (int j = 0; j < 7; ++j) {
    EXPECT_EQ(f.values(0, j), 1.5);
    EXPECT_EQ(f.values(1, j), 0.0);
    EXPECT_EQ(f.values(2, j), -2.0);
  }
}

TEST(Sample, CircleRadius) {
  FieldSamples f = sample(circle_curve(), 64);
  for (int j = 0; j < 64; ++j) EXPECT_NEAR(f.values.col(j).norm(), 1.0 / kTwoPi, 1e-15);
}

TEST(Sample, MatchesDirectSeries) {
  Rng rng(1);
  ClosedCurve c = random_curve(rng, 3, 5);
  FieldSamples f = sample(c, 64);
  for (int j = 0; j < 64; ++j) {
    double x = double(j) / 64;
    Eigen::VectorXd direct = Eigen::VectorXd::Zero(3);
    for (int k = -5; k <= 5; ++k)
      direct += (c.spectrum().mode(k) * std::polar(1.0, kTwoPi * k * x)).real();
    EXPECT_LT((f.values.col(j) - direct).norm(), 1e-12);
    EXPECT_LT((c.evaluate(x) - direct).norm(), 1e-12);
  }
}

TEST(Sample, RefusesAliasingGrid) {
  Rng rng(2);
  ClosedCurve c = random_curve(rng, 2, 8);
  EXPECT_THROW(sample(c, 16), AliasingError);
  EXPECT_NO_THROW(sample(c, 17));
}

TEST(Derivative, ConstantIsZero) {
  Spectrum s(2, 0);
  s(0, 0) = 3.0;
  ClosedCurve d = derivative(ClosedCurve(s), 1);
  EXPECT_EQ(sup_norm(sample(d, 4)), 0.0);
}

TEST(Derivative, CircleCurvature) {
  FieldSamples f = sample(derivative(circle_curve(), 2), 32);
  for (int j = 0; j < 32; ++j) EXPECT_NEAR(f.values.col(j).norm(), kTwoPi, 1e-13);
}

TEST(Derivative, ThirdDerivativeAgainstFiniteDifferences) {
  Rng rng(3);
  ClosedCurve c = random_curve(rng, 3, 3);
  const int m = 4096;
  const double h = 1.0 / m;
  FieldSamples p = sample(c, m), d3 = sample(derivative(c, 3), m);
  double err = 0.0;
  for (int j = 0; j < m; ++j) {
    auto at = [&](int o) { return p.values.col(((j + o) % m + m) % m); };
    Eigen::VectorXd fd = (-at(3) + 8 * at(2) - 13 * at(1) + 13 * at(-1) - 8 * at(-2) + at(-3)) / (8 * h * h * h);
    err = std::max(err, (fd - d3.values.col(j)).norm());
  }
  EXPECT_LT(err / sup_norm(d3), 1e-6);
}

TEST(Derivative, SpectralDifferentiationOfSamplesAgrees) {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    ClosedCurve c = random_curve(rng, 3, 12);
    const int m = 64;
    Spectrum fromSamples = analyze(sample(c, m), 12);
    for (int k = -12; k <= 12; ++k) fromSamples.mode(k) *= Complex(0, kTwoPi * k);
    FieldSamples a = synthesize(fromSamples, m), b = sample(derivative(c, 1), m);
    EXPECT_LT(sup_norm(FieldSamples(a.values - b.values)), 1e-10 * sup_norm(b));
  }
}

TEST(Length, CircleAndScaling) {
  EXPECT_NEAR(length(circle_curve(), 16), 1.0, 1e-12);
  Rng rng(5);
  ClosedCurve c = random_curve(rng, 3, 4);
  EXPECT_NEAR(length(scale(c, 2.5), 64), 2.5 * length(c, 64), 1e-12);
}

TEST(Length, MatchesAdaptiveQuadrature) {
  Rng rng(6);
  ClosedCurve c = random_curve(rng, 3, 6);
  double ref = integrate_adaptive([&](double x) { return c.evaluate(x, 1).norm(); }, 0.0, 1.0, 1e-13);
  EXPECT_NEAR(length(c, 256), ref, 1e-9);
}

TEST(Reparametrize, CircleIsFixedPoint) {
  ClosedCurve c = circle_curve();
  ClosedCurve r = reparametrize_unit_speed(c, 4, 1e-12);
  Spectrum a = c.spectrum().resized(4), b = r.spectrum().resized(4);
  EXPECT_LT((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reparametrize, EllipseReachesTolerance) {
  ClosedCurve r = reparametrize_unit_speed(ellipse(2.0, 1.0), 64, 1e-8);
  ASSERT_TRUE(r.certified());
  EXPECT_LE(speed_deviation(r, 4096), 1e-8);
  EXPECT_NEAR(length(r, 4096), 1.0, 2 * r.unit_speed_tol().value());
}

TEST(Reparametrize, WarpedCircleTracesSamePointSet) {
  ClosedCurve r = reparametrize_unit_speed(warped_circle(), 32, 1e-10);
  FieldSamples p = sample(r, 1024);
  const double radius = 1.0 / kTwoPi;
  double dist = 0.0, maxgap = 0.0;
  std::vector<double> angles;
  for (int j = 0; j < 1024; ++j) {
    dist = std::max(dist, std::abs(p.values.col(j).norm() - radius));
    angles.push_back(std::atan2(p.values(1, j), p.values(0, j)));
  }
  std::sort(angles.begin(), angles.end());
  for (size_t i = 1; i < angles.size(); ++i) maxgap = std::max(maxgap, angles[i] - angles[i - 1]);
  maxgap = std::max(maxgap, angles.front() + kTwoPi - angles.back());
  EXPECT_LE(dist, 1e-6);
  // Unit-speed sampling spaces the points evenly in angle, so the sample set also covers the circle.
  EXPECT_NEAR(maxgap, kTwoPi / 1024, 1e-6);
}

TEST(Reparametrize, Idempotent) {
  ClosedCurve r1 = reparametrize_unit_speed(ellipse(1.0, 0.6), 48, 1e-9);
  ClosedCurve r2 = reparametrize_unit_speed(r1, 48, 1e-9);
  Spectrum a = r1.spectrum().resized(48), b = r2.spectrum().resized(48);
  EXPECT_LT((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Reparametrize, CertifiedLength) {
  Rng rng(7);
  Spectrum s = circle_curve().spectrum().resized(3);
  s(2, 2) = 0.004;
  s(2, -2) = 0.004;
  s(0, 3) = Complex(0.002, 0.001);
  s(0, -3) = std::conj(s(0, 3));
  ClosedCurve r = reparametrize_unit_speed(ClosedCurve(s), 48, 1e-10);
  EXPECT_NEAR(length(r, 1024), 1.0, r.dim() * r.unit_speed_tol().value() + 1e-15);
}

TEST(Reparametrize, SingularCurveIsRejected) {
  // x ↦ (cos 2πx, cos 4πx)... has zero speed at x = 0.
  Spectrum s(2, 2);
  s(0, 1) = 0.5;
  s(0, -1) = 0.5;
  s(1, 2) = 0.125;
  s(1, -2) = 0.125;
  EXPECT_THROW(reparametrize_unit_speed(ClosedCurve(s), 16, 1e-8), SingularParametrizationError);
}

TEST(IntrinsicDistance, Examples) {
  ClosedCurve c = circle_curve();
  EXPECT_NEAR(intrinsic_distance(c, 0.1, 0.3), 0.2, 1e-15);
  EXPECT_NEAR(intrinsic_distance(c, 0.1, 0.9), 0.2, 1e-15);
  EXPECT_EQ(intrinsic_distance(c, 0.37, 0.37), 0.0);
  Spectrum s = c.spectrum();
  EXPECT_THROW(intrinsic_distance(ClosedCurve(s), 0.1, 0.2), UncertifiedCurveError);
}

TEST(IntrinsicDistance, MetricProperties) {
  ClosedCurve c = circle_curve();
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    double x = rng.uniform(), y = rng.uniform(), z = rng.uniform();
    EXPECT_EQ(intrinsic_distance(c, x, y), intrinsic_distance(c, y, x));
    EXPECT_LE(intrinsic_distance(c, x, z), intrinsic_distance(c, x, y) + intrinsic_distance(c, y, z) + 1e-15);
    EXPECT_LE(intrinsic_distance(c, x, y), 0.5);
  }
}

TEST(SimplicityMargin, Circle) {
  EXPECT_NEAR(simplicity_margin(circle_curve(), 64), 2.0 / kPi, 1e-6);
}

TEST(SimplicityMargin, FigureEightCrossing) {
  EXPECT_LT(simplicity_margin(figure_eight(), 64), 1e-3);
}

TEST(SimplicityMargin, ScaleInvariant) {
  ClosedCurve r = reparametrize_unit_speed(scale(circle_curve(), 2.0), 8, 1e-12);
  EXPECT_NEAR(simplicity_margin(r, 64), 2.0 / kPi, 1e-6);
}
