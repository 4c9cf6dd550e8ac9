#include "slq/hmatrix.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "slq/rng.hpp"

namespace slq {

namespace {

void require_same_shape(const HMatrix& a, const HMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

HMatrix HMatrix::identity(int n) {
  HMatrix m(n);
  for (int r = 0; r < n; ++r) m(r, r) = kOne;
  return m;
}

int HMatrix::n() const {
  if (!square()) throw std::logic_error("HMatrix::n: matrix is not square");
  return rows_;
}

HMatrix& HMatrix::operator+=(const HMatrix& o) {
  require_same_shape(*this, o, "HMatrix::operator+=");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

HMatrix& HMatrix::operator-=(const HMatrix& o) {
  require_same_shape(*this, o, "HMatrix::operator-=");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

HMatrix& HMatrix::operator*=(double a) {
  for (auto& q : e_) q *= a;
  return *this;
}

HMatrix HMatrix::operator-() const {
  HMatrix m = *this;
  for (auto& q : m.e_) q = -q;
  return m;
}

HMatrix HMatrix::adjoint() const {
  HMatrix m(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int s = 0; s < cols_; ++s) m(s, r) = (*this)(r, s).conj();
  return m;
}

double HMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& q : e_) acc += q.norm2();
  return std::sqrt(acc);
}

double HMatrix::real_trace() const {
  double acc = 0.0;
  const int m = std::min(rows_, cols_);
  for (int r = 0; r < m; ++r) acc += (*this)(r, r).w;
  return acc;
}

bool HMatrix::is_zero() const {
  for (const auto& q : e_)
    if (!q.is_zero()) return false;
  return true;
}

HMatrix operator+(HMatrix a, const HMatrix& b) { return a += b; }
HMatrix operator-(HMatrix a, const HMatrix& b) { return a -= b; }
HMatrix operator*(HMatrix a, double s) { return a *= s; }
HMatrix operator*(double s, HMatrix a) { return a *= s; }

HMatrix operator*(const HMatrix& a, const HMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("HMatrix product: size mismatch");
  HMatrix c(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int t = 0; t < a.cols(); ++t) {
      const Quaternion& art = a(r, t);
      if (art.is_zero()) continue;
      for (int s = 0; s < b.cols(); ++s) c(r, s) += art * b(t, s);
    }
  return c;
}

HMatrix bracket(const HMatrix& X, const HMatrix& Y) {
  require_same_shape(X, Y, "bracket");
  if (!X.square()) throw std::invalid_argument("bracket: square matrices required");
  return X * Y - Y * X;
}

bool is_traceless(const HMatrix& X, double tol) {
  return std::abs(X.real_trace()) <= tol * std::max(1.0, X.frobenius_norm());
}

HMatrix project_traceless(HMatrix X) {
  const int n = X.n();
  const double shift = X.real_trace() / n;
  for (int r = 0; r < n; ++r) X(r, r).w -= shift;
  return X;
}

Eigen::MatrixXcd complex_adjoint(const HMatrix& M) {
  const int n = M.n();
  Eigen::MatrixXcd C(2 * n, 2 * n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      const Quaternion& q = M(r, s);
      const std::complex<double> z1(q.w, q.x), z2(q.y, q.z);
      C(2 * r, 2 * s) = z1;
      C(2 * r, 2 * s + 1) = z2;
      C(2 * r + 1, 2 * s) = -std::conj(z2);
      C(2 * r + 1, 2 * s + 1) = std::conj(z1);
    }
  return C;
}

HMatrix from_complex_adjoint(const Eigen::MatrixXcd& C, double tol) {
  if (C.rows() != C.cols() || C.rows() % 2 != 0)
    throw std::invalid_argument("from_complex_adjoint: expected square even-sized matrix");
  const int n = static_cast<int>(C.rows() / 2);
  const double scale = C.norm() + 1.0;
  HMatrix M(n);
  double worst = 0.0;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      const std::complex<double> z1 = C(2 * r, 2 * s);
      const std::complex<double> z2 = C(2 * r, 2 * s + 1);
      worst = std::max(worst, std::abs(C(2 * r + 1, 2 * s + 1) - std::conj(z1)));
      worst = std::max(worst, std::abs(C(2 * r + 1, 2 * s) + std::conj(z2)));
      M(r, s) = {z1.real(), z1.imag(), z2.real(), z2.imag()};
    }
  if (worst > tol * scale)
    throw std::runtime_error("from_complex_adjoint: block symmetry violated");
  return M;
}

double study_det_abs(const HMatrix& g) {
  const Eigen::MatrixXcd C = complex_adjoint(g);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(C);
  const std::complex<double> det = lu.determinant();
  const double mag = std::abs(det);
  if (!std::isfinite(mag)) throw std::overflow_error("study_det_abs: determinant overflow");

  double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
  const auto diag = lu.matrixLU().diagonal();
  for (int i = 0; i < diag.size(); ++i) {
    const double p = std::abs(diag(i));
    pmax = std::max(pmax, p);
    pmin = std::min(pmin, p);
  }
  if (pmin == 0.0 || mag == 0.0) return 0.0;

  // The relative error of an LU determinant grows with the pivot spread; past
  // a spread of ~1e12 the phase carries no information at all.
  const double rel_err = 2.0 * diag.size() * 1e-16 * (pmax / pmin);
  if (rel_err > 1e-3)
    throw std::runtime_error("study_det_abs: matrix too ill-conditioned for the determinant");

  // Phase trap: a determinant from outside the image has |Im| comparable to
  // |det|, many orders above any roundoff the spread can explain.
  const double slack = std::min(1e-2, std::max(1e-10, 10.0 * rel_err));
  if (std::abs(det.imag()) > slack * mag || det.real() < 0.0)
    throw std::runtime_error("study_det_abs: determinant of the adjoint is not real");
  return std::sqrt(mag);
}

HMatrix hexp(const HMatrix& X) {
  const Eigen::MatrixXcd E = complex_adjoint(X).exp();
  return from_complex_adjoint(E);
}

HMatrix inverse(const HMatrix& g) {
  const int n = g.n();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(complex_adjoint(g));
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw std::runtime_error("inverse: matrix is numerically singular");
  return from_complex_adjoint(lu.solve(Eigen::MatrixXcd::Identity(2 * n, 2 * n)));
}

HMatrix renormalize_det(const HMatrix& g) {
  const double s = study_det_abs(g);
  if (s <= 0.0) throw std::runtime_error("renormalize_det: |det| is zero");
  return g * std::pow(s, -1.0 / g.n());
}

Eigen::VectorXd vectorize(const HMatrix& M) {
  Eigen::VectorXd v(4 * M.rows() * M.cols());
  int i = 0;
  for (int r = 0; r < M.rows(); ++r)
    for (int s = 0; s < M.cols(); ++s) {
      const Quaternion& q = M(r, s);
      v[i++] = q.w;
      v[i++] = q.x;
      v[i++] = q.y;
      v[i++] = q.z;
    }
  return v;
}

HMatrix from_vector(const Eigen::VectorXd& v, int n) {
  if (v.size() != 4 * n * n) throw std::invalid_argument("from_vector: size mismatch");
  HMatrix M(n);
  int i = 0;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      M(r, s) = {v[i], v[i + 1], v[i + 2], v[i + 3]};
      i += 4;
    }
  return M;
}

HMatrix random_algebra_element(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_algebra_element: n >= 1 required");
  auto eng = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  HMatrix X(n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      Quaternion& q = X(r, s);
      if (r != s) q.w = gauss(eng);
      q.x = gauss(eng);
      q.y = gauss(eng);
      q.z = gauss(eng);
    }
  // Diagonal real parts: n-1 standard normal coefficients against the Helmert
  // orthonormal basis of {a in R^n : sum a_r = 0}, so every trace-free
  // coordinate is iid N(0,1).
  for (int k = 1; k < n; ++k) {
    const double c = gauss(eng);
    const double inv = c / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int r = 0; r < k; ++r) X(r, r).w += inv;
    X(k, k).w -= inv * k;
  }
  return X;
}

HMatrix random_group_element(int n, std::uint64_t seed, double scale) {
  return hexp(random_algebra_element(n, seed) * scale);
}

}  // namespace slq
