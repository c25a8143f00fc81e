#include <cmath>

#include <gtest/gtest.h>

#include "knot/quadrature.hpp"

using namespace knot;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int p : {1, 2, 5, 16, 40}) {
    const QuadratureRule& g = gauss_legendre(p);
    for (int k = 0; k <= 2 * p - 1; ++k) {
      double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      double got = apply_rule(g, [k](double x) { return std::pow(x, k); });
      EXPECT_NEAR(got, exact, 1e-14) << "p=" << p << " k=" << k;
    }
  }
}

TEST(GaussLegendre, MappedInterval) {
  QuadratureRule g = gauss_legendre(12, 1.0, 3.0);
  EXPECT_NEAR(apply_rule(g, [](double x) { return std::exp(x); }), std::exp(3.0) - std::exp(1.0), 1e-13);
}

TEST(GaussJacobi, IntegratesAgainstPowerWeight) {
  // ∫_{-1}^1 (1+t)^b (1+t)^k dt = 2^{b+k+1}/(b+k+1)
  for (double b : {-0.75, -0.5, 0.0, 0.3}) {
    const int p = 10;
    QuadratureRule g = gauss_jacobi(p, 0.0, b);
    for (int k = 0; k <= 2 * p - 1; ++k) {
      const double exact = std::pow(2.0, b + k + 1) / (b + k + 1);
      const double got = apply_rule(g, [k](double t) { return std::pow(1.0 + t, k); });
      EXPECT_NEAR(got / exact, 1.0, 1e-12) << "b=" << b << " k=" << k;
    }
  }
}

TEST(GaussPowerWeight, Moments) {
  const double c = -0.5, h = 1e-3;
  QuadratureRule g = gauss_power_weight(8, c, h);
  for (int k = 0; k < 16; ++k) {
    double exact = std::pow(h, c + k + 1) / (c + k + 1);
    EXPECT_NEAR(apply_rule(g, [k](double w) { return std::pow(w, k); }) / exact, 1.0, 1e-12);
  }
}

TEST(Adaptive, SquareRootSingularity) {
  double v = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-13);
  EXPECT_NEAR(v, 2.0 / 3.0, 1e-12);
}
