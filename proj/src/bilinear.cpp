#include "knot/bilinear.hpp"

#include <algorithm>
#include <cmath>

#include "knot/chord.hpp"
#include "knot/quadrature.hpp"
#include "knot/special_functions.hpp"
#include "knot/spectral.hpp"

namespace knot {

void BilinearSpec::validate() const {
  if (!(s1 >= 0.0 && s1 <= 1.0 && s2 >= 0.0 && s2 <= 1.0)) throw ParameterError("bilinear: s1, s2 must lie in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("bilinear: β must lie in (0, 1)");
  if (!(eps > 0.0 && eps <= 0.5)) throw ParameterError("bilinear: ε must lie in (0, 1/2]");
}

namespace {

void check_scalar(const Spectrum& s, const char* what) {
  if (s.dim() != 1) throw ParameterError(std::string("bilinear: ") + what + " must be scalar");
}

// Values of f(x + s) and f(x - s) on the grid.
void shifted_pair(const GridTransform& t, const Spectrum& f, double s, Eigen::MatrixXd& plus, Eigen::MatrixXd& minus) {
  const int n = f.modes();
  Eigen::MatrixXcd a(1, 2 * n + 1), b(1, 2 * n + 1);
  for (int k = -n; k <= n; ++k) {
    const Complex e = std::polar(1.0, kTwoPi * k * s);
    a(0, k + n) = f(0, k) * e;
    b(0, k + n) = f(0, k) * std::conj(e);
  }
  t.synthesize_pair(a, b, plus, minus);
}

}  // namespace

FieldSamples bilinear_real(const Spectrum& f, const Spectrum& g, const BilinearSpec& spec, int m) {
  spec.validate();
  check_scalar(f, "f");
  check_scalar(g, "g");
  if (f.reality_defect() > 1e-12 || g.reality_defect() > 1e-12)
    throw ParameterError("bilinear_real: spectra must represent real functions");
  const int n = std::max(f.modes(), g.modes());
  if (2 * n + 1 > m) throw AliasingError("bilinear_real: grid too small for the spectra");
  GridTransform t(m);
  const int bandwidth = f.modes() + g.modes();
  const std::vector<double> breaks = geometric_breaks(spec.eps, 0.5, 2.0, 1.27 / std::max(bandwidth, 1));
  const QuadratureRule& ref = gauss_legendre(16);
  Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(m);
  Eigen::MatrixXd fp, fm, gp, gm;
  for (int i = static_cast<int>(breaks.size()) - 2; i >= 0; --i) {
    const double a = breaks[i], b = breaks[i + 1];
    Eigen::RowVectorXd panel = Eigen::RowVectorXd::Zero(m);
    for (int q = 0; q < ref.nodes.size(); ++q) {
      const double w = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[q];
      shifted_pair(t, f, spec.s1 * w, fp, fm);
      shifted_pair(t, g, spec.s2 * w, gp, gm);
      // Odd kernel: F(w)/w^{1+β} + F(-w)/(-w)^{...} = (F(w) - F(-w)) / w^{1+β}.
      const double kw = ref.weights[q] / std::pow(w, 1.0 + spec.beta);
      panel += kw * (fp.cwiseProduct(gp) - fm.cwiseProduct(gm));
    }
    total += 0.5 * (b - a) * panel;
  }
  return FieldSamples(Eigen::MatrixXd(total));
}

Spectrum bilinear_fourier(const Spectrum& f, const Spectrum& g, const BilinearSpec& spec) {
  spec.validate();
  check_scalar(f, "f");
  check_scalar(g, "g");
  const int nf = f.modes(), ng = g.modes(), n = nf + ng;
  Spectrum out(1, n);
  for (int k = -n; k <= n; ++k) {
    Complex acc = 0.0;
    for (int l = std::max(-nf, k - ng); l <= std::min(nf, k + ng); ++l) {
      const Complex c = f(0, l) * g(0, k - l);
      if (c == 0.0) continue;
      const double phi = kTwoPi * (l * spec.s1 + (k - l) * spec.s2);
      if (phi == 0.0) continue;
      const double mag = std::pow(std::abs(phi), spec.beta) *
                         (si_beta(0.5 * phi, spec.beta) - si_beta(phi * spec.eps, spec.beta));
      acc += c * Complex(0.0, 2.0 * mag);
    }
    out(0, k) = acc;
  }
  return out;
}

void fit_slope(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& stderr_out) {
  const int n = static_cast<int>(x.size());
  slope = 0.0;
  stderr_out = 0.0;
  if (n < 2) return;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return;
  slope = sxy / sxx;
  if (n > 2) {
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = y[i] - my - slope * (x[i] - mx);
      rss += r * r;
    }
    stderr_out = std::sqrt(rss / (n - 2) / sxx);
  }
}

LeibnizTable leibniz_probe(const Spectrum& f, const Spectrum& g, double m, const BilinearSpec& spec,
                           const std::vector<double>& eps_grid) {
  if (!(m > 0.5)) throw ParameterError("leibniz_probe: Sobolev index must exceed 1/2");
  LeibnizTable t;
  const double denom = sobolev_norm(f, m + spec.beta) * sobolev_norm(g, m + spec.beta);
  if (denom == 0.0) {
    t.defined = false;
    return t;
  }
  std::vector<double> x, y;
  for (double eps : eps_grid) {
    BilinearSpec s = spec;
    s.eps = eps;
    LeibnizRow r;
    r.eps = eps;
    r.ratio = sobolev_norm(bilinear_fourier(f, g, s), m) / denom;
    t.max_ratio = std::max(t.max_ratio, r.ratio);
    t.rows.push_back(r);
    x.push_back(std::log(eps));
    y.push_back(r.ratio);
  }
  fit_slope(x, y, t.slope, t.slope_stderr);
  return t;
}

}  // namespace knot
