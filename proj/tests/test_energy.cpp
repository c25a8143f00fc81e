#include <cmath>

#include <gtest/gtest.h>

#include "knot/energy.hpp"
#include "knot/first_variation.hpp"
#include "knot/quadrature.hpp"
#include "test_helpers.hpp"

using namespace knot;
using knot::testing::circle_curve;
using knot::testing::perturbed_circle;
using knot::testing::Rng;

namespace {

// 2 ∫_0^{1/2} (π^α / sin^α(πw) - w^{-α}) dw in long double with a w^{2-α} weighted rule.
double circle_oracle(double alpha) {
  const QuadratureRule rule = gauss_power_weight(30, 2.0 - alpha, 0.5);
  const long double pi = 3.141592653589793238462643383279502884L;
  long double s = 0.0L;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const long double w = rule.nodes[i];
    const long double r = pi * w / std::sin(pi * w);
    s += rule.weights[i] * (std::pow(r, (long double)alpha) - 1.0L) / (w * w);
  }
  return static_cast<double>(2.0L * s);
}

ClosedCurve warped_circle() {
  const int m = 512;
  Eigen::MatrixXd v(3, m);
  for (int j = 0; j < m; ++j) {
    const double x = double(j) / m;
    const double phi = x + 0.1 * std::sin(kTwoPi * x) / kTwoPi;
    v(0, j) = std::cos(kTwoPi * phi) / kTwoPi;
    v(1, j) = std::sin(kTwoPi * phi) / kTwoPi;
    v(2, j) = 0.0;
  }
  return curve_from_samples(v, 100);
}

ClosedCurve translation(double a, double b, double c) {
  Spectrum s(3, 0);
  s(0, 0) = a;
  s(1, 0) = b;
  s(2, 0) = c;
  return ClosedCurve(s);
}

}  // namespace

TEST(Energy, CircleMobiusValueIsFour) {
  EnergyValue e = ohara_energy(circle_curve(3), 2.0);
  EXPECT_NEAR(e.value, 4.0, 1e-10);
  EXPECT_NEAR(circle_energy(2.0), 4.0, 1e-12);
}

TEST(Energy, CircleMatchesOneDimensionalReduction) {
  for (double alpha : {2.25, 2.5, 2.75, 2.9}) {
    const double oracle = circle_oracle(alpha);
    EXPECT_NEAR(ohara_energy(circle_curve(3), alpha).value, oracle, 1e-9 * oracle) << alpha;
    EXPECT_NEAR(circle_energy(alpha), oracle, 1e-11 * oracle) << alpha;
  }
}

TEST(Energy, NonNegativeOnPerturbedCircles) {
  Rng rng(31);
  for (int i = 0; i < 3; ++i) {
    ClosedCurve c = perturbed_circle(rng, 0.1, 4);
    EXPECT_GT(ohara_energy(c, 2.5).value, 0.0);
  }
}

TEST(Energy, CircleIsBelowPerturbations) {
  Rng rng(32);
  const double e0 = ohara_energy(circle_curve(3), 2.5).value;
  for (int i = 0; i < 3; ++i) EXPECT_GT(ohara_energy(perturbed_circle(rng, 0.1, 4), 2.5).value, e0);
}

TEST(Energy, ScalingLaw) {
  Rng rng(33);
  ClosedCurve c = perturbed_circle(rng, 0.05, 3);
  for (double alpha : {2.0, 2.5, 2.75}) {
    const double e = ohara_energy(c, alpha).value;
    for (double lambda : {0.5, 2.0})
      EXPECT_NEAR(ohara_energy_general(scale(c, lambda), alpha).value, std::pow(lambda, 2.0 - alpha) * e,
                  1e-10 * e);
  }
}

TEST(Energy, ReparametrizationInvariance) {
  ClosedCurve w = warped_circle();
  for (double alpha : {2.25, 2.5}) {
    EnergyQuadSpec q;
    q.grid_size = 512;
    const double e = ohara_energy_general(w, alpha, q).value;
    EXPECT_NEAR(e, circle_oracle(alpha), 1e-8 * e) << alpha;
  }
}

TEST(Energy, QuadratureRefinementWithinEstimate) {
  Rng rng(34);
  ClosedCurve c = perturbed_circle(rng, 0.05, 3);
  EnergyQuadSpec q;
  EnergyValue e = ohara_energy(c, 2.5, q);
  q.min_offset *= 0.5;
  q.grid_size *= 2;
  EnergyValue f = ohara_energy(c, 2.5, q);
  // Floor at round-off level of the accumulated sum.
  EXPECT_LE(std::abs(e.value - f.value), std::max(e.error_estimate, 1e-13 * e.value));
}

TEST(Energy, RefusesBadInput) {
  Spectrum s = circle_curve(3).spectrum();
  EXPECT_THROW(ohara_energy(ClosedCurve(s), 2.5), UncertifiedCurveError);
  EXPECT_THROW(ohara_energy(circle_curve(3), 3.0), ParameterError);
  EXPECT_THROW(ohara_energy(circle_curve(3), 1.9), ParameterError);
  EnergyQuadSpec q;
  q.min_offset = 0.0;
  EXPECT_THROW(ohara_energy(circle_curve(3), 2.5, q), ParameterError);
}

TEST(Energy, SelfIntersectionIsInfinite) {
  Spectrum s(2, 2);
  s(0, 1) = 0.5;
  s(0, -1) = 0.5;
  s(1, 2) = Complex(0, -0.25);
  s(1, -2) = Complex(0, 0.25);
  EXPECT_TRUE(std::isinf(ohara_energy_general(ClosedCurve(s), 2.5).value));
}

TEST(Gateaux, TranslationIsFlat) {
  Rng rng(35);
  ClosedCurve c = perturbed_circle(rng, 0.05, 3);
  EXPECT_NEAR(gateaux_fd(c, translation(0.3, -1.0, 0.5), 2.5).value, 0.0, 1e-6);
}

TEST(Gateaux, RotationIsFlat) {
  Rng rng(36);
  ClosedCurve c = perturbed_circle(rng, 0.05, 3);
  Eigen::Matrix3d a;
  a << 0, 1, -2, -1, 0, 0.5, 2, -0.5, 0;
  ClosedCurve h(Spectrum(a.cast<Complex>() * c.coeffs()));
  EXPECT_NEAR(gateaux_fd(c, h, 2.5).value, 0.0, 1e-6);
}

TEST(Gateaux, DilationOfCircle) {
  // d/dt E((1+t)γ) = (2-α) E(γ), and the gradient pairs with γ the same way.
  ClosedCurve c = circle_curve(3);
  for (double alpha : {2.25, 2.75}) {
    const double e = circle_oracle(alpha);
    GateauxResult g = gateaux_fd(c, c, alpha);
    EXPECT_NEAR(g.value, (2.0 - alpha) * e, 1e-7 * e);
    FieldSamples h = gradient_report(c, alpha, TruncationLadder{}, 64).h_field;
    FieldSamples p = sample(c, 64);
    const double pairing = h.values.cwiseProduct(p.values).sum() / 64;
    EXPECT_NEAR(pairing, (2.0 - alpha) * e, 1e-5 * e);
  }
}

TEST(Gateaux, MatchesGradientPairing) {
  Rng rng(37);
  ClosedCurve c = perturbed_circle(rng, 0.05, 3);
  const int m = 256;
  Eigen::MatrixXd raw(3, m);
  for (int j = 0; j < m; ++j) {
    const double x = double(j) / m;
    raw.col(j) << std::cos(kTwoPi * 2 * x), std::sin(kTwoPi * 3 * x + 0.3), std::cos(kTwoPi * x);
  }
  ClosedCurve h = curve_from_samples(project_normal(c, FieldSamples(raw)).values, 100);
  FieldSamples hs = sample(h, m);
  const double alpha = 2.5;
  FieldSamples grad = gradient_report(c, alpha, TruncationLadder{}, m).h_field;
  const double pairing = grad.values.cwiseProduct(hs.values).sum() / m;
  GateauxResult g = gateaux_fd(c, h, alpha);
  EXPECT_NEAR(g.value, pairing, 1e-3 * std::abs(pairing));
  EXPECT_LE(g.error_estimate, 1e-4 * std::abs(g.value));
}

TEST(Gateaux, RejectsBadLadder) {
  ClosedCurve c = circle_curve(3);
  EXPECT_THROW(gateaux_fd(c, c, 2.5, {1e-3, 2e-3}), ParameterError);
  EXPECT_THROW(gateaux_fd(c, c, 2.5, {}), ParameterError);
  // γ + 1·h is a planar figure eight.
  Spectrum s(3, 2);
  s(0, 1) = 0.5;
  s(0, -1) = 0.5;
  s(1, 2) = Complex(0, -0.25);
  s(1, -2) = Complex(0, 0.25);
  ClosedCurve h = combine(1.0, ClosedCurve(s), -1.0, c);
  EXPECT_THROW(gateaux_fd(c, h, 2.5, {1.0}), SelfIntersectionError);
}
