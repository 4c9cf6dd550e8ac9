#ifndef SLQ_QUATERNION_HPP
#define SLQ_QUATERNION_HPP

#include <cmath>

namespace slq {

/// Default relative tolerance for membership-style tests.
inline constexpr double kDefaultTol = 1e-9;

/// Quaternion w + x·i + y·j + z·k with double coordinates.
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion real(double a) { return {a, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion complex(double re, double im) { return {re, im, 0.0, 0.0}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  constexpr bool is_zero() const { return w == 0.0 && x == 0.0 && y == 0.0 && z == 0.0; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double a) {
    w *= a; x *= a; y *= a; z *= a;
    return *this;
  }
  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

inline constexpr Quaternion kOne{1, 0, 0, 0};
inline constexpr Quaternion kI{0, 1, 0, 0};
inline constexpr Quaternion kJ{0, 0, 1, 0};
inline constexpr Quaternion kK{0, 0, 0, 1};

/// Decomposition q = part_1i + part_jk along H = span{1,i} ⊕ span{j,k}.
struct QuatSplit {
  Quaternion part_1i;
  Quaternion part_jk;
};

constexpr QuatSplit split(const Quaternion& q) {
  return {{q.w, q.x, 0.0, 0.0}, {0.0, 0.0, q.y, q.z}};
}

/// True iff q lies (numerically) in H_{1,i} ∪ H_{j,k}: one of the two split
/// parts has norm ≤ tol·|q|. The zero quaternion counts as a member.
inline bool in_forbidden_union(const Quaternion& q, double tol = kDefaultTol) {
  const QuatSplit s = split(q);
  const double qn = q.norm();
  return s.part_1i.norm() <= tol * qn || s.part_jk.norm() <= tol * qn;
}

/// e^{it} q e^{-is} with unit-complex rotations acting from both sides.
inline Quaternion circle_conjugate(double t, double s, const Quaternion& q) {
  const Quaternion left = Quaternion::complex(std::cos(t), std::sin(t));
  const Quaternion right = Quaternion::complex(std::cos(s), -std::sin(s));
  return left * q * right;
}

/// Tangent pair of the two-torus orbit t,s ↦ e^{it} q e^{-is} at the identity
/// parameters: v1 = ∂/∂t = i·q, v2 = ∂/∂s = -q·i. `independent` is a relative
/// 2-rank test of {v1, v2} in R^4.
struct TangentPair {
  Quaternion v1;
  Quaternion v2;
  bool independent = false;
};

inline TangentPair tangent_pair(const Quaternion& q, double tol = kDefaultTol) {
  TangentPair tp;
  tp.v1 = kI * q;
  tp.v2 = -(q * kI);
  // Singular values of the 4x2 matrix [v1 v2] via its 2x2 Gram matrix.
  const double g11 = tp.v1.norm2();
  const double g22 = tp.v2.norm2();
  const double g12 = tp.v1.w * tp.v2.w + tp.v1.x * tp.v2.x + tp.v1.y * tp.v2.y +
                     tp.v1.z * tp.v2.z;
  const double tr = g11 + g22;
  const double det = g11 * g22 - g12 * g12;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double lmax = 0.5 * (tr + disc);
  const double lmin = 0.5 * (tr - disc);
  tp.independent = lmin > tol * tol * lmax && lmax > 0.0;
  return tp;
}

}  // namespace slq

#endif
