#ifndef SLQ_HMATRIX_HPP
#define SLQ_HMATRIX_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "slq/quaternion.hpp"

namespace slq {

/// Dense quaternionic matrix, row-major. Square in almost all contexts
/// (group/algebra elements); rectangular instances carry Grassmann frames.
class HMatrix {
 public:
  HMatrix() = default;
  explicit HMatrix(int n) : rows_(n), cols_(n), e_(static_cast<std::size_t>(n) * n) {}
  HMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {}

  static HMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  /// Side length; only meaningful for square matrices.
  int n() const;

  Quaternion& operator()(int r, int s) { return e_[static_cast<std::size_t>(r) * cols_ + s]; }
  const Quaternion& operator()(int r, int s) const {
    return e_[static_cast<std::size_t>(r) * cols_ + s];
  }

  HMatrix& operator+=(const HMatrix& o);
  HMatrix& operator-=(const HMatrix& o);
  HMatrix& operator*=(double a);
  HMatrix operator-() const;

  /// Conjugate transpose.
  HMatrix adjoint() const;

  double frobenius_norm() const;
  double real_trace() const;
  bool is_zero() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Quaternion> e_;
};

HMatrix operator+(HMatrix a, const HMatrix& b);
HMatrix operator-(HMatrix a, const HMatrix& b);
HMatrix operator*(HMatrix a, double s);
HMatrix operator*(double s, HMatrix a);
HMatrix operator*(const HMatrix& a, const HMatrix& b);

/// Commutator [X, Y] = XY - YX. Throws on size mismatch.
HMatrix bracket(const HMatrix& X, const HMatrix& Y);

/// Elements of sl(n,H) are HMatrix values with zero real-part trace; this is
/// a contract, not a distinct type.
using AlgebraElement = HMatrix;

/// |Re tr X| ≤ tol·max(1, ‖X‖_F)?
bool is_traceless(const HMatrix& X, double tol = 1e-12);

/// Subtract Re(tr X)/n from the diagonal real parts.
HMatrix project_traceless(HMatrix X);

/// Complex adjoint: each entry q = z1 + z2·j becomes the 2x2 block
/// [[z1, z2], [-conj(z2), conj(z1)]], assembled blockwise into a 2n x 2n
/// complex matrix. Multiplicative: chi(AB) = chi(A)chi(B).
Eigen::MatrixXcd complex_adjoint(const HMatrix& M);

/// Inverse of complex_adjoint. Verifies the block symmetry
/// J·conj(C)·J^{-1} = C that characterizes the image; throws if the residual
/// exceeds tol relative to ‖C‖.
HMatrix from_complex_adjoint(const Eigen::MatrixXcd& C, double tol = 1e-10);

/// |det| computed through the complex adjoint: det(chi(g))^{1/2}. The complex
/// determinant is real and nonnegative on the image; its imaginary part is
/// asserted below 1e-10 relative.
double study_det_abs(const HMatrix& g);

/// Group exponential: exp of the complex adjoint (scaling-and-squaring Padé)
/// pulled back through the block embedding.
HMatrix hexp(const HMatrix& X);

/// Inverse through the complex adjoint. Throws if numerically singular.
HMatrix inverse(const HMatrix& g);

/// Rescale g by study_det_abs(g)^{-1/n} so |det| returns to 1.
HMatrix renormalize_det(const HMatrix& g);

/// Row-major real coordinates: entry (r,s) occupies slots 4(r·cols+s)..+3 in
/// the order (w, x, y, z).
Eigen::VectorXd vectorize(const HMatrix& M);
HMatrix from_vector(const Eigen::VectorXd& v, int n);

/// Trace-free Gaussian sample: iid standard normal coordinates in an
/// orthonormal basis of the 4n²-1 dimensional trace-free subspace.
/// Deterministic for fixed (n, seed).
HMatrix random_algebra_element(int n, std::uint64_t seed);

/// Random group element hexp(scale · random_algebra_element).
HMatrix random_group_element(int n, std::uint64_t seed, double scale = 0.4);

}  // namespace slq

#endif
