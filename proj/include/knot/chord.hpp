#pragma once

#include <vector>

#include "knot/curve.hpp"

namespace knot {

// 1 - (1 - e)^p without cancellation for small e (e < 1).
double one_minus_power(double e, double p);

// g_s(u) = (1 / (2u^s)) (1 - u^s) / (1 - u²), continuous at u = 1 with value s/4.
double g_kernel(double s, double u);

// Largest |k| whose coefficient exceeds rel times the largest coefficient.
int effective_bandwidth(const Spectrum& s, double rel = 1e-13);

// Breakpoints lo = b_0 < ... < b_n = hi, geometric with ratio at most `ratio`
// and spacing at most max_width.
std::vector<double> geometric_breaks(double lo, double hi, double ratio, double max_width);

// Grid-wide evaluation of chord quantities of a curve for a fixed offset w, using
// spectral multipliers so that every quantity stays accurate as w -> 0.
class ChordSampler {
 public:
  ChordSampler(const ClosedCurve& curve, int m);

  int grid_size() const { return m_; }
  int dim() const { return dim_; }
  const Eigen::MatrixXd& position() const { return pos_; }
  const Eigen::MatrixXd& velocity() const { return vel_; }
  const Eigen::MatrixXd& acceleration() const { return acc_; }

  // Taylor remainder field 2(γ(x+w) - γ(x) - wγ'(x))/w² - γ''(x) at +w and -w (w > 0).
  void remainder(double w, Eigen::MatrixXd& plus, Eigen::MatrixXd& minus) const;
  // The same remainder split into its even and odd parts in w: plus = even + odd, minus = even - odd.
  void remainder_parts(double w, Eigen::MatrixXd& even, Eigen::MatrixXd& odd) const;

  // Arbitrary coefficients (dim x (2N+1)) shifted by +s and -s.
  void shifted(const Eigen::MatrixXcd& coeffs, double s, Eigen::MatrixXd& plus, Eigen::MatrixXd& minus) const;

  const GridTransform& transform() const { return transform_; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }

 private:
  int m_, dim_, modes_;
  Eigen::MatrixXcd coeffs_;
  GridTransform transform_;
  Eigen::MatrixXd pos_, vel_, acc_;
  mutable Eigen::MatrixXcd work_a_, work_b_;
};

// Σ_{j>=3} (iθ)^j / j!  =  e^{iθ} - 1 - iθ + θ²/2
Complex exp_remainder3(double theta);
// Σ_{j>=1} (iθ)^j / (j+1)!  =  (e^{iθ} - 1)/(iθ) - 1
Complex mean_remainder(double theta);

}  // namespace knot
