#include "knot/spectrum.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace knot {

Spectrum::Spectrum(int dim, int modes) : coeffs_(Eigen::MatrixXcd::Zero(dim, 2 * modes + 1)) {
  if (dim < 1 || modes < 0) throw ParameterError("Spectrum: dimension and modes must be positive");
}

Spectrum::Spectrum(Eigen::MatrixXcd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.cols() % 2 != 1 || coeffs_.rows() < 1)
    throw ParameterError("Spectrum: coefficient matrix must be dim x (2N+1)");
}

Spectrum Spectrum::resized(int modes) const {
  Spectrum out(dim(), modes);
  const int n = std::min(modes, this->modes());
  for (int k = -n; k <= n; ++k) out.mode(k) = mode(k);
  return out;
}

double Spectrum::max_norm() const {
  double m = 0.0;
  for (Eigen::Index j = 0; j < coeffs_.cols(); ++j) m = std::max(m, coeffs_.col(j).norm());
  return m;
}

double Spectrum::reality_defect() const {
  double d = 0.0;
  for (int k = 0; k <= modes(); ++k) d = std::max(d, (mode(-k) - mode(k).conjugate()).norm());
  const double s = max_norm();
  return s > 0.0 ? d / s : 0.0;
}

void Spectrum::symmetrize() {
  for (int k = 1; k <= modes(); ++k) {
    Eigen::VectorXcd avg = 0.5 * (mode(k) + mode(-k).conjugate());
    mode(k) = avg;
    mode(-k) = avg.conjugate();
  }
  mode(0) = mode(0).real().cast<Complex>();
}

double l2_norm(const FieldSamples& f) { return std::sqrt(f.values.squaredNorm() / f.grid_size()); }

double sup_norm(const FieldSamples& f) {
  double s = 0.0;
  for (int j = 0; j < f.grid_size(); ++j) s = std::max(s, f.values.col(j).norm());
  return s;
}

double l2_inner(const FieldSamples& a, const FieldSamples& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw GridMismatchError("l2_inner: fields live on different grids");
  return a.values.cwiseProduct(b.values).sum() / a.grid_size();
}

struct GridTransform::Impl {
  mutable Eigen::FFT<double> fft;
  mutable std::vector<Complex> spec, buf;
};

GridTransform::GridTransform(int m) : m_(m), impl_(std::make_unique<Impl>()) {
  if (m < 1) throw ParameterError("GridTransform: grid size must be positive");
  impl_->fft.SetFlag(Eigen::FFT<double>::Unscaled);
  impl_->spec.resize(m);
  impl_->buf.resize(m);
}

GridTransform::~GridTransform() = default;

namespace {

void check_alias(int modes, int m) {
  if (2 * modes + 1 > m) throw AliasingError("grid of " + std::to_string(m) + " points cannot resolve " +
                                             std::to_string(modes) + " modes");
}

}  // namespace

Eigen::MatrixXd GridTransform::synthesize(const Eigen::MatrixXcd& coeffs) const {
  const int n = static_cast<int>(coeffs.cols() - 1) / 2;
  check_alias(n, m_);
  Eigen::MatrixXd out(coeffs.rows(), m_);
  auto& spec = impl_->spec;
  auto& buf = impl_->buf;
  // Two rows per complex transform.
  for (Eigen::Index d = 0; d < coeffs.rows(); d += 2) {
    const bool pair = d + 1 < coeffs.rows();
    std::fill(spec.begin(), spec.end(), Complex(0.0));
    for (int k = -n; k <= n; ++k) {
      Complex v = coeffs(d, k + n);
      if (pair) v += Complex(0.0, 1.0) * coeffs(d + 1, k + n);
      spec[(k + m_) % m_] += v;
    }
    impl_->fft.inv(buf, spec);
    for (int j = 0; j < m_; ++j) {
      out(d, j) = buf[j].real();
      if (pair) out(d + 1, j) = buf[j].imag();
    }
  }
  return out;
}

void GridTransform::synthesize_pair(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, Eigen::MatrixXd& fa,
                                    Eigen::MatrixXd& fb) const {
  const int na = static_cast<int>(a.cols() - 1) / 2, nb = static_cast<int>(b.cols() - 1) / 2;
  check_alias(std::max(na, nb), m_);
  fa.resize(a.rows(), m_);
  fb.resize(b.rows(), m_);
  auto& spec = impl_->spec;
  auto& buf = impl_->buf;
  for (Eigen::Index d = 0; d < a.rows(); ++d) {
    std::fill(spec.begin(), spec.end(), Complex(0.0));
    for (int k = -na; k <= na; ++k) spec[(k + m_) % m_] += a(d, k + na);
    for (int k = -nb; k <= nb; ++k) spec[(k + m_) % m_] += Complex(0.0, 1.0) * b(d, k + nb);
    impl_->fft.inv(buf, spec);
    for (int j = 0; j < m_; ++j) {
      fa(d, j) = buf[j].real();
      fb(d, j) = buf[j].imag();
    }
  }
}

Eigen::MatrixXcd GridTransform::analyze(const Eigen::MatrixXd& values, int modes) const {
  if (values.cols() != m_) throw GridMismatchError("analyze: sample count differs from grid size");
  check_alias(modes, m_);
  Eigen::MatrixXcd out(values.rows(), 2 * modes + 1);
  auto& spec = impl_->spec;
  auto& buf = impl_->buf;
  for (Eigen::Index d = 0; d < values.rows(); ++d) {
    for (int j = 0; j < m_; ++j) buf[j] = values(d, j);
    impl_->fft.fwd(spec, buf);
    for (int k = -modes; k <= modes; ++k) out(d, k + modes) = spec[(k + m_) % m_] / static_cast<double>(m_);
  }
  return out;
}

Spectrum analyze(const FieldSamples& samples, int modes) {
  GridTransform t(samples.grid_size());
  Spectrum s(t.analyze(samples.values, modes));
  s.symmetrize();
  return s;
}

Spectrum analyze(const FieldSamples& samples) { return analyze(samples, (samples.grid_size() - 1) / 2); }

FieldSamples synthesize(const Spectrum& spectrum, int m) {
  GridTransform t(m);
  return FieldSamples(t.synthesize(spectrum.coeffs()));
}

}  // namespace knot
