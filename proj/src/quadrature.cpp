#include "knot/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace knot {

namespace {

QuadratureRule compute_gauss_legendre(int p) {
  QuadratureRule r;
  r.nodes.resize(p);
  r.weights.resize(p);
  for (int i = 0; i < (p + 1) / 2; ++i) {
    // Newton on P_p starting from the Tricomi estimate.
    double x = std::cos(kPi * (i + 0.75) / (p + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= p; ++n) {
        double pn = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = pn;
      }
      if (p == 1) p0 = 1.0;
      dp = p * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= p; ++n) {
      double pn = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = pn;
    }
    if (p == 1) p0 = 1.0;
    dp = p * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[p - 1 - i] = x;
    r.weights[i] = w;
    r.weights[p - 1 - i] = w;
  }
  if (p % 2 == 1) r.nodes[p / 2] = 0.0;
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int p) {
  if (p < 1) throw ParameterError("gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[p];
  if (!slot) slot = std::make_unique<QuadratureRule>(compute_gauss_legendre(p));
  return *slot;
}

QuadratureRule gauss_legendre(int p, double a, double b) {
  const QuadratureRule& ref = gauss_legendre(p);
  QuadratureRule r;
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  r.nodes = (c + h * ref.nodes.array()).matrix();
  r.weights = h * ref.weights;
  return r;
}

QuadratureRule gauss_jacobi(int p, double a, double b) {
  if (p < 1 || a <= -1.0 || b <= -1.0) throw ParameterError("gauss_jacobi: bad parameters");
  Eigen::VectorXd diag(p), sub(std::max(p - 1, 0));
  const double ab = a + b;
  for (int n = 0; n < p; ++n) {
    const double t = 2.0 * n + ab;
    diag[n] = (n == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (t * (t + 2.0));
  }
  for (int n = 1; n < p; ++n) {
    const double t = 2.0 * n + ab;
    double beta;
    if (n == 1)
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    else
      beta = 4.0 * n * (n + a) * (n + b) * (n + ab) / (t * t * (t + 1.0) * (t - 1.0));
    sub[n - 1] = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  QuadratureRule r;
  r.nodes = es.eigenvalues();
  r.weights = (mu0 * es.eigenvectors().row(0).array().square()).transpose();
  return r;
}

QuadratureRule gauss_power_weight(int p, double c, double h) {
  QuadratureRule ref = gauss_jacobi(p, 0.0, c);
  QuadratureRule r;
  r.nodes = (0.5 * h * (1.0 + ref.nodes.array())).matrix();
  r.weights = std::pow(0.5 * h, c + 1.0) * ref.weights;
  return r;
}

namespace {

double gauss15(const std::function<double(double)>& f, double a, double b) {
  const QuadratureRule& g = gauss_legendre(15);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 15; ++i) s += g.weights[i] * f(c + h * g.nodes[i]);
  return h * s;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss15(f, a, m), right = gauss15(f, m, b);
  const double diff = std::abs(left + right - whole);
  // Stop once the discrepancy is at the tolerance or at round-off level.
  if (depth <= 0 || diff <= tol || diff <= 1e-15 * (std::abs(left) + std::abs(right))) return left + right;
  return adapt(f, a, m, left, 0.5 * tol, depth - 1) + adapt(f, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, gauss15(f, a, b), tol, max_depth);
}

}  // namespace knot
