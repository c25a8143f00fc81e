#pragma once

#include <functional>
#include <vector>

#include "knot/core.hpp"

namespace knot {

// Nodes and weights of an interpolatory rule on a fixed interval.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// p-point Gauss-Legendre rule on [-1, 1]. Cached; thread safe.
const QuadratureRule& gauss_legendre(int p);

// p-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int p, double a, double b);

// p-point Gauss-Jacobi rule for the weight (1-t)^a (1+t)^b on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_jacobi(int p, double a, double b);

// Rule for ∫_0^h w^c f(w) dw with c > -1: nodes in (0, h), weights include w^c.
QuadratureRule gauss_power_weight(int p, double c, double h);

// Adaptive Gauss-Legendre (order 15 vs. its two halves) to absolute tolerance tol.
// Subdivision order is fixed, so the result is deterministic.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth = 30);

// Sum of f over a rule.
template <class F>
double apply_rule(const QuadratureRule& rule, F&& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

}  // namespace knot
