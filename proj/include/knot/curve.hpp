#pragma once

#include <optional>

#include "knot/spectrum.hpp"

namespace knot {

// Closed curve R/Z -> R^n stored by its Fourier coefficients.
// Construction enforces Hermitian symmetry and trims trailing modes below 1e-14 of the largest one.
class ClosedCurve {
 public:
  ClosedCurve() = default;
  explicit ClosedCurve(Spectrum spectrum, std::optional<double> unit_speed_tol = std::nullopt);

  int dim() const { return spectrum_.dim(); }
  int modes() const { return spectrum_.modes(); }
  const Spectrum& spectrum() const { return spectrum_; }
  const Eigen::MatrixXcd& coeffs() const { return spectrum_.coeffs(); }

  // Certified max | |γ'| - 1 |, or empty when the curve is not known to be unit speed.
  std::optional<double> unit_speed_tol() const { return unit_speed_tol_; }
  bool certified() const { return unit_speed_tol_.has_value(); }

  // r-th derivative at an arbitrary parameter value (direct series summation).
  Eigen::VectorXd evaluate(double x, int order = 0) const;

 private:
  Spectrum spectrum_;
  std::optional<double> unit_speed_tol_;
};

// Values at x_j = j/m. Throws AliasingError if m < 2N+1.
FieldSamples sample(const ClosedCurve& curve, int m);

// Coefficient k multiplied by (2πik)^r. The result carries no unit-speed certificate.
ClosedCurve derivative(const ClosedCurve& curve, int order);

// Trapezoid value of ∫|γ'| on m points (m >= 4N).
double length(const ClosedCurve& curve, int m);

// Linear combination a·γ + b·h of two curves of equal dimension (uncertified).
ClosedCurve combine(double a, const ClosedCurve& gamma, double b, const ClosedCurve& h);
ClosedCurve scale(const ClosedCurve& curve, double factor);

// Arc-length function s(x) = ∫_0^x |γ'| of a regular curve, represented spectrally.
class ArcLength {
 public:
  ArcLength(const ClosedCurve& curve, int grid);

  double total() const { return total_; }
  double operator()(double x) const;
  double speed(double x) const;
  double min_speed() const { return min_speed_; }
  // Coefficients of |γ'| (scalar spectrum).
  const Spectrum& speed_spectrum() const { return speed_; }

 private:
  Spectrum speed_;
  double total_ = 0.0;
  double min_speed_ = 0.0;
};

// Max | |γ'| - 1 | on a uniform grid.
double speed_deviation(const ClosedCurve& curve, int grid);

struct ReparamOptions {
  int certification_grid = 4096;
  int max_iterations = 50;
};

// Unit-speed, length-1 reparametrization by arc-length inversion and spectral resampling.
ClosedCurve reparametrize_unit_speed(const ClosedCurve& curve, int modes_out, double tol,
                                     const ReparamOptions& options = {});

// Constant-speed resampling without the final rescaling; also returns the length.
ClosedCurve resample_constant_speed(const ClosedCurve& curve, int modes_out, double& length_out);

// Shorter arc between parameters of a certified unit-speed curve.
double intrinsic_distance(const ClosedCurve& curve, double x, double y);

// min over grid pairs of chord / intrinsic distance; zero signals a self-intersection.
double simplicity_margin(const ClosedCurve& curve, int m);

// Curve from a real sample matrix (dim x m), keeping the given number of modes.
ClosedCurve curve_from_samples(const Eigen::MatrixXd& values, int modes);

}  // namespace knot
