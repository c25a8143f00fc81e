#include <cmath>

#include <gtest/gtest.h>

#include "knot/first_variation.hpp"
#include "knot/special_functions.hpp"
#include "knot/spectral.hpp"
#include "test_helpers.hpp"

using namespace knot;
using knot::testing::circle_curve;
using knot::testing::perturbed_circle;
using knot::testing::random_curve;
using knot::testing::random_scalar;
using knot::testing::Rng;

namespace {

// Scalar curve-like spectrum in the plane with planted magnitudes a(k), k = 1..n.
ClosedCurve planted(int n, double (*a)(int)) {
  Spectrum s(2, n);
  for (int k = 1; k <= n; ++k) {
    s(0, k) = a(k);
    s(0, -k) = a(k);
    s(1, k) = Complex(0, -a(k));
    s(1, -k) = Complex(0, a(k));
  }
  return ClosedCurve(s);
}

}  // namespace

TEST(Transform, PureModeIsConcentrated) {
  Eigen::MatrixXd v(2, 64);
  for (int j = 0; j < 64; ++j) {
    v(0, j) = std::cos(kTwoPi * 3 * j / 64.0);
    v(1, j) = std::sin(kTwoPi * 3 * j / 64.0);
  }
  Spectrum s = analyze(FieldSamples(v));
  for (int k = -s.modes(); k <= s.modes(); ++k) {
    if (std::abs(k) == 3) continue;
    EXPECT_LE(s.mode(k).norm(), 1e-14) << k;
  }
  EXPECT_NEAR(std::abs(s(0, 3) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(1, 3) - Complex(0, -0.5)), 0.0, 1e-15);
}

TEST(Transform, RoundTripAndParseval) {
  Rng rng(1);
  Spectrum s = random_scalar(rng, 20);
  FieldSamples f = synthesize(s, 64);
  Spectrum back = analyze(f, 20);
  EXPECT_LE((back.coeffs() - s.coeffs()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(s.coeffs().squaredNorm(), std::pow(l2_norm(f), 2), 1e-12 * s.coeffs().squaredNorm());
  EXPECT_THROW(synthesize(s, 40), AliasingError);
}

TEST(QMultiplier, ZeroModeVanishes) {
  Spectrum s(3, 0);
  s(0, 0) = 1.5;
  s(2, 0) = -2.0;
  EXPECT_EQ(apply_q_multiplier(s, 2.5).coeffs().norm(), 0.0);
}

TEST(QMultiplier, SingleModeScaling) {
  Spectrum s(1, 2);
  s(0, 2) = Complex(0.3, -0.4);
  s(0, -2) = std::conj(s(0, 2));
  Spectrum q = apply_q_multiplier(s, 2.5);
  const double factor = std::pow(kTwoPi, 2.5) * q_k(2, 2.5) * std::pow(2.0, 3.5);
  EXPECT_NEAR(std::abs(q(0, 2) - factor * s(0, 2)), 0.0, 1e-13 * factor);
  EXPECT_NEAR(std::abs(q(0, -2) - factor * s(0, -2)), 0.0, 1e-13 * factor);
  EXPECT_THROW(apply_q_multiplier(s, 3.0), ParameterError);
}

TEST(QMultiplier, MatchesExtrapolatedQuadrature) {
  Rng rng(9);
  ClosedCurve c = perturbed_circle(rng, 0.05, 3);
  const int m = 256;
  for (double alpha : {2.25, 2.75}) {
    TruncationLadder ladder;
    auto t = truncated_fields(c, alpha, ladder.eps_values, m);
    std::vector<FieldSamples> q;
    for (auto& f : t) q.push_back(f.q);
    FieldSamples quad = extrapolate_eps(q, ladder.eps_values, alpha).field;
    FieldSamples spec = synthesize(apply_q_multiplier(c.spectrum(), alpha), m);
    EXPECT_LE(l2_norm(FieldSamples(quad.values - spec.values)), 2e-3 * l2_norm(spec)) << alpha;
  }
}

TEST(Sobolev, Examples) {
  Spectrum c(2, 0);
  c(0, 0) = 3.0;
  c(1, 0) = -4.0;
  for (double s : {0.0, 0.5, 2.0}) EXPECT_NEAR(sobolev_norm(c, s), 5.0, 1e-15);
  Spectrum one(1, 1);
  one(0, 1) = 1.0;
  EXPECT_NEAR(sobolev_norm(one, 1.0), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(sobolev_norm(one, -0.1), ParameterError);
}

TEST(Sobolev, ZeroOrderIsL2AndMonotone) {
  Rng rng(2);
  Spectrum s = random_scalar(rng, 12);
  EXPECT_NEAR(sobolev_norm(s, 0.0), l2_norm(synthesize(s, 64)), 1e-12);
  double prev = 0.0;
  for (double t = 0.0; t <= 3.0; t += 0.25) {
    const double n = sobolev_norm(s, t);
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(CoercivityBound, HoldsOnCircleAndRandomCurves) {
  Cor42Result c = cor42_check(circle_curve(3), 2.5, 0, 1.0);
  EXPECT_TRUE(c.holds);
  EXPECT_GT(c.lhs, 0.0);
  EXPECT_EQ(c.argmin_k, 1);  // q_k increases with k
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    ClosedCurve g = random_curve(rng, 3, 10);
    for (int l : {0, 1, 2})
      for (double alpha : {2.2, 2.8}) {
        Cor42Result r = cor42_check(g, alpha, l, 0.5 * i);
        EXPECT_TRUE(r.holds) << r.lhs << " " << r.constant * r.rhs;
      }
  }
}

TEST(CoercivityBound, ConstantFromDefinition) {
  const double alpha = 2.5;
  Cor42Result c = cor42_check(circle_curve(3), alpha, 0, 0.0);
  const double q1 = q_k(1, alpha);
  EXPECT_NEAR(c.constant, std::pow(kTwoPi, 3) * std::pow(2.0, (alpha - 2) / 2) / q1, 1e-12 * c.constant);
  EXPECT_LE(c.constant_asymptotic, c.constant);
}

TEST(CoercivityBound, ZeroCurve) {
  Spectrum z(3, 1);
  Cor42Result c = cor42_check(ClosedCurve(z), 2.5, 1, 1.0);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);
  EXPECT_TRUE(c.holds);
}

TEST(Decay, GeometricSpectrumRecoversRate) {
  ClosedCurve c = planted(30, [](int k) { return std::exp(-double(k)); });
  DecayDiagnostics d = decay_diagnostics(c, 0.5);
  EXPECT_NEAR(d.decay_rate, 1.0, 0.05);
  EXPECT_GE(d.fit_quality, 0.99);
  EXPECT_EQ(d.verdict, DecayVerdict::Exponential);
  EXPECT_TRUE(std::isfinite(d.factorial_sup));
}

TEST(Decay, AlgebraicSpectrumIsSubexponential) {
  ClosedCurve c = planted(64, [](int k) { return std::pow(double(k), -4.0); });
  DecayDiagnostics d = decay_diagnostics(c, 0.5);
  EXPECT_EQ(d.verdict, DecayVerdict::Subexponential);
  EXPECT_GT(d.power_fit_quality, d.fit_quality);
}

TEST(Decay, TooFewModesIsInconclusive) {
  DecayDiagnostics d = decay_diagnostics(circle_curve(3), 0.5);
  EXPECT_EQ(d.verdict, DecayVerdict::Inconclusive);
  EXPECT_THROW(decay_diagnostics(circle_curve(3), 1.0), ParameterError);
}

TEST(Banach, ConstantAndSingleMode) {
  Spectrum one(1, 0);
  one(0, 0) = 1.0;
  BanachCheck a = banach_product_check(one, one, 1);
  EXPECT_NEAR(a.lhs, 1.0, 1e-15);
  EXPECT_NEAR(a.rhs, 1.0, 1e-15);
  // f = 2cos(2πx): f² = 2 + 2cos(4πx) has modes {-2, 0, 2} with coefficients {1, 2, 1}.
  Spectrum f(1, 1);
  f(0, 1) = 1.0;
  f(0, -1) = 1.0;
  Spectrum p = multiply(f, f);
  EXPECT_NEAR(std::abs(p(0, 0) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p(0, 2) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p(0, 1)), 0.0, 1e-15);
  BanachCheck b = banach_product_check(f, f, 1);
  EXPECT_NEAR(b.lhs, std::sqrt(14.0), 1e-14);
  EXPECT_NEAR(b.rhs, 4.0, 1e-14);
}

TEST(Banach, RandomPairsHaveFiniteRatio) {
  Rng rng(4);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    BanachCheck c = banach_product_check(random_scalar(rng, 8), random_scalar(rng, 8), 1);
    ASSERT_TRUE(std::isfinite(c.ratio()));
    worst = std::max(worst, c.ratio());
  }
  EXPECT_GT(worst, 0.0);
  EXPECT_LT(worst, 10.0);
}
