#pragma once

#include <memory>

#include "knot/core.hpp"

namespace knot {

// Fourier coefficients of an R^n-valued 1-periodic function, modes k = -N..N.
// Column N + k of coeffs() holds the coefficient vector of mode k.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(int dim, int modes);
  explicit Spectrum(Eigen::MatrixXcd coeffs);

  int dim() const { return static_cast<int>(coeffs_.rows()); }
  int modes() const { return static_cast<int>((coeffs_.cols() - 1) / 2); }

  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }
  Eigen::MatrixXcd& coeffs() { return coeffs_; }

  Complex& operator()(int d, int k) { return coeffs_(d, k + modes()); }
  Complex operator()(int d, int k) const { return coeffs_(d, k + modes()); }
  auto mode(int k) { return coeffs_.col(k + modes()); }
  auto mode(int k) const { return coeffs_.col(k + modes()); }

  // Truncate or zero-pad to the given number of modes.
  Spectrum resized(int modes) const;
  // Largest coefficient-vector norm over all modes.
  double max_norm() const;
  // Max |c(-k) - conj c(k)| relative to max_norm(); zero for real-valued functions.
  double reality_defect() const;
  // Enforce exact Hermitian symmetry by averaging c(k) and conj c(-k).
  void symmetrize();

 private:
  Eigen::MatrixXcd coeffs_;
};

// Values of an R^n-valued field on the uniform grid x_j = j/m. Column j holds the value at x_j.
struct FieldSamples {
  Eigen::MatrixXd values;

  FieldSamples() = default;
  explicit FieldSamples(Eigen::MatrixXd v) : values(std::move(v)) {}

  int dim() const { return static_cast<int>(values.rows()); }
  int grid_size() const { return static_cast<int>(values.cols()); }
  static double x(int j, int m) { return static_cast<double>(j) / m; }
};

// Discrete L2 norm (trapezoid rule on the periodic grid) and sup norm of a field.
double l2_norm(const FieldSamples& f);
double sup_norm(const FieldSamples& f);
// Trapezoid-rule ∫<a, b> dx on the periodic grid.
double l2_inner(const FieldSamples& a, const FieldSamples& b);

// FFT-based synthesis and analysis on a fixed periodic grid of m points.
class GridTransform {
 public:
  explicit GridTransform(int m);
  ~GridTransform();
  GridTransform(const GridTransform&) = delete;
  GridTransform& operator=(const GridTransform&) = delete;

  int size() const { return m_; }

  // Real field from Hermitian coefficients (dim x (2N+1), N < m/2 required).
  Eigen::MatrixXd synthesize(const Eigen::MatrixXcd& coeffs) const;
  // Two real fields from two Hermitian coefficient sets with one complex transform each row.
  void synthesize_pair(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, Eigen::MatrixXd& fa,
                       Eigen::MatrixXd& fb) const;
  // Coefficients k = -N..N of the trigonometric interpolant (Nyquist mode dropped); N < m/2.
  Eigen::MatrixXcd analyze(const Eigen::MatrixXd& values, int modes) const;

 private:
  struct Impl;
  int m_;
  std::unique_ptr<Impl> impl_;
};

Spectrum analyze(const FieldSamples& samples, int modes);
// Default analysis keeps every mode below Nyquist.
Spectrum analyze(const FieldSamples& samples);
FieldSamples synthesize(const Spectrum& spectrum, int m);

}  // namespace knot
