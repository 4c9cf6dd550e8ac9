#ifndef SLQ_WEDGE_HPP
#define SLQ_WEDGE_HPP

#include <vector>

#include "slq/hmatrix.hpp"
#include "slq/quaternion.hpp"

namespace slq {

/// Trace of the rescaled adjoint flow e^{-t(a1-an)} e^{t ad(B)} A.
struct DecayTrace {
  std::vector<double> t_grid;
  std::vector<double> off_target_norms;   ///< Frobenius norm without the (1,n) entry
  std::vector<double> target_entry_norms; ///< |(1,n) entry|
  double fitted_rate = 0.0;               ///< LSQ slope of log(off) against t
};

/// Requires a complex-diagonal B_diag whose real parts satisfy the end-gap
/// ordering, and a strictly increasing positive grid.
DecayTrace scaled_limit_trace(const HMatrix& A, const HMatrix& B_diag,
                              const std::vector<double>& t_grid, double tol = 1e-9);

/// Dominant closed-form rate of the off-target norm: the largest
/// a_r - a_s - (a_1 - a_n) over nonzero entries of A other than (1,n).
double predicted_off_rate(const HMatrix& A, const HMatrix& B_diag);

struct ConeResult {
  bool full = false;
  double margin = 0.0;  ///< inradius of the sample hull at the origin, >= 0
};

/// Does the convex cone generated by t ↦ e^{itc1} q e^{-itc2} fill all of H?
/// Samples the curve over a resonance-free window, then certifies whether the
/// origin is interior to the hull of the normalized samples in R^4.
ConeResult torus_cone_full(const Quaternion& q, double c1, double c2, int samples);

/// 15-element real basis of the embedded sl(2,H) supported on rows/columns
/// {r, s} (1-based, r < s).
std::vector<HMatrix> sl2_basis(int n, int r, int s);

struct HomotopyCheck {
  double ad_residual = 0.0;        ///< Ad(P(π/2)) image vs span of sl(2,H)_{1,n}
  double fixes_vd_residual = 0.0;  ///< max_t dist(P(t)·V_d, V_d)
};

/// Rotation pair P(t) = e^{tA} e^{tB} with A swinging e_1 into e_d and B
/// swinging e_{d+1} into e_n (either is zero when its indices coincide):
/// P(t) fixes V_d and P(π/2) conjugates sl(2,H)_{d,d+1} onto sl(2,H)_{1,n}.
HomotopyCheck verify_conjugation_homotopy(int n, int d);

struct OrbitTangentRank {
  int rank = 0;
  std::vector<double> singular_values;
};

/// Real rank of the tangent space at V_d of the sl(2,H)_{1,n}-orbit on the
/// Grassmannian (full_algebra switches to the whole sl(n,H) basis).
OrbitTangentRank orbit_tangent_rank(int n, int d, bool full_algebra = false);

}  // namespace slq

#endif
