#pragma once

#include <vector>

#include "knot/spectrum.hpp"

namespace knot {

struct BilinearSpec {
  double s1 = 0.0, s2 = 0.0;
  double beta = 0.5;
  double eps = 1e-2;

  void validate() const;
};

// H^ε(f, g)(x) = ∫_{ε<=|w|<=1/2} f(x + s1 w) g(x + s2 w) / (w |w|^β) dw for real scalar spectra,
// by Gauss quadrature over symmetric node pairs ±w on an m-point grid.
FieldSamples bilinear_real(const Spectrum& f, const Spectrum& g, const BilinearSpec& spec, int m);

// Exact Fourier coefficients of H^ε(f, g) for trigonometric polynomials (complex spectra allowed):
// Σ_l f̂(l) ĝ(k-l) 2i |φ|^β (Si_β(φ/2) - Si_β(φε)), φ = 2π(l s1 + (k-l) s2), φ = 0 terms vanish.
Spectrum bilinear_fourier(const Spectrum& f, const Spectrum& g, const BilinearSpec& spec);

struct LeibnizRow {
  double eps = 0.0;
  double ratio = 0.0;  // ‖H^ε(f,g)‖_{H^m} / (‖f‖_{H^{m+β}} ‖g‖_{H^{m+β}})
};

struct LeibnizTable {
  std::vector<LeibnizRow> rows;
  bool defined = true;  // false when a norm in the denominator vanishes
  double max_ratio = 0.0;
  double slope = 0.0;         // least-squares slope of ratio against log ε
  double slope_stderr = 0.0;  // its standard error
};

// Least-squares line through (x_i, y_i) with the standard error of the slope.
void fit_slope(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& stderr_out);

LeibnizTable leibniz_probe(const Spectrum& f, const Spectrum& g, double m, const BilinearSpec& spec,
                           const std::vector<double>& eps_grid);

}  // namespace knot
