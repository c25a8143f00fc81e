#include "knot/special_functions.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "knot/quadrature.hpp"

namespace knot {

namespace {

constexpr double kSeriesCut = 1e-2;
constexpr double kTol = 1e-16;

// Prefix sums over the arches [(j-1)π, jπ] of an integrand with an integrable power singularity at 0.
class ArchTable {
 public:
  ArchTable(std::function<double(double)> integrand, std::function<double(double)> head)
      : f_(std::move(integrand)), head_(std::move(head)) {}

  // ∫_0^{kπ}
  double prefix(int k) {
    std::lock_guard<std::mutex> lock(mu_);
    extend(k);
    return sums_[k];
  }

  // ∫_0^x for x >= 0
  double integral(double x) {
    if (x <= kSeriesCut) return head_(x);
    const int j = static_cast<int>(std::floor(x / kPi));
    if (j == 0) return head_(kSeriesCut) + integrate_adaptive(f_, kSeriesCut, x, kTol);
    const double base = prefix(j);
    if (x == j * kPi) return base;
    return base + apply_rule(gauss_legendre(30, j * kPi, x), f_);
  }

 private:
  void extend(int k) {
    if (sums_.empty()) sums_.push_back(0.0);
    while (static_cast<int>(sums_.size()) <= k) {
      const int j = static_cast<int>(sums_.size());
      double arch;
      if (j == 1)
        arch = head_(kSeriesCut) + integrate_adaptive(f_, kSeriesCut, kPi, kTol);
      else
        arch = integrate_adaptive(f_, (j - 1) * kPi, j * kPi, kTol);
      sums_.push_back(sums_.back() + arch);
    }
  }

  std::function<double(double)> f_, head_;
  std::vector<double> sums_;
  std::mutex mu_;
};

std::uint64_t key_of(double v) {
  std::uint64_t k;
  std::memcpy(&k, &v, sizeof k);
  return k;
}

ArchTable& si_table(double beta) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::unique_ptr<ArchTable>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[key_of(beta)];
  if (!slot) {
    auto f = [beta](double t) { return std::sin(t) * std::pow(t, -1.0 - beta); };
    auto head = [beta](double x) {
      // Σ (-1)^j x^{2j+1-β} / ((2j+1)! (2j+1-β))
      double s = 0.0, fact = 1.0;
      for (int j = 0; j < 6; ++j) {
        if (j > 0) fact *= (2.0 * j) * (2.0 * j + 1.0);
        const double e = 2.0 * j + 1.0 - beta;
        s += ((j % 2) ? -1.0 : 1.0) * std::pow(x, e) / (fact * e);
      }
      return s;
    };
    slot = std::make_unique<ArchTable>(f, head);
  }
  return *slot;
}

// σ² - 2 + 2cos σ without cancellation for small σ.
double chord_defect(double s) {
  if (s >= 1.0) return s * s - 2.0 + 2.0 * std::cos(s);
  const double s2 = s * s;
  double term = s2 * s2 / 24.0, sum = 0.0;
  for (int j = 2; j < 12; ++j) {
    sum += term;
    term *= -s2 / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
  }
  return 2.0 * sum;
}

ArchTable& q_table(double alpha) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::unique_ptr<ArchTable>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[key_of(alpha)];
  if (!slot) {
    auto f = [alpha](double s) { return chord_defect(s) * std::pow(s, -2.0 - alpha); };
    auto head = [alpha](double x) {
      // 2 Σ_{j>=2} (-1)^j x^{2j-1-α} / ((2j)! (2j-1-α))
      double s = 0.0, fact = 24.0;
      for (int j = 2; j < 8; ++j) {
        if (j > 2) fact *= (2.0 * j - 1.0) * (2.0 * j);
        const double e = 2.0 * j - 1.0 - alpha;
        s += ((j % 2) ? -1.0 : 1.0) * std::pow(x, e) / (fact * e);
      }
      return 2.0 * s;
    };
    slot = std::make_unique<ArchTable>(f, head);
  }
  return *slot;
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("Si_beta: beta must lie in (0, 1)");
}

}  // namespace

AlphaParams AlphaParams::checked(double alpha, bool allow_mobius) {
  const bool ok = (alpha > 2.0 || (allow_mobius && alpha == 2.0)) && alpha < 3.0;
  if (!ok) throw ParameterError(allow_mobius ? "alpha must lie in [2, 3)" : "alpha must lie in (2, 3)");
  return AlphaParams{alpha};
}

double si_beta(double x, double beta) {
  check_beta(beta);
  if (x < 0.0) return -si_beta(-x, beta);
  return si_table(beta).integral(x);
}

double si_beta_max(double beta) {
  check_beta(beta);
  return si_table(beta).prefix(1);
}

double si_beta_limit(double beta) {
  check_beta(beta);
  // Partial sums over arches alternate around the limit; repeated pairwise averaging
  // (Euler transform) removes the alternating tail.
  constexpr int first = 50, levels = 14;
  std::vector<double> s(levels + 1);
  for (int i = 0; i <= levels; ++i) s[i] = si_table(beta).prefix(first + i);
  for (int l = 0; l < levels; ++l)
    for (int i = 0; i < levels - l; ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
  return s[0];
}

double lambda_k(int k, double alpha) {
  AlphaParams::checked(alpha);
  if (k < 0) throw ParameterError("lambda_k: k must be nonnegative");
  return si_table(alpha - 2.0).prefix(k);
}

double lambda_infinity(double alpha) {
  AlphaParams::checked(alpha);
  return si_beta_limit(alpha - 2.0);
}

double q_k(int k, double alpha) {
  AlphaParams::checked(alpha);
  if (k == 0) return 0.0;
  return 4.0 * kPi * q_table(alpha).prefix(std::abs(k));
}

double q_infinity(double alpha) {
  return 8.0 * kPi * lambda_infinity(alpha) / (alpha * (alpha + 1.0) * (alpha - 1.0));
}

double q_symbol(int k, double alpha) {
  if (k == 0) return 0.0;
  const double ak = std::abs(static_cast<double>(k));
  return std::pow(kTwoPi, alpha) * q_k(k, alpha) * std::pow(ak, alpha + 1.0);
}

}  // namespace knot
