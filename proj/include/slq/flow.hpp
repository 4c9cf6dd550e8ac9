#ifndef SLQ_FLOW_HPP
#define SLQ_FLOW_HPP

#include <cstdint>
#include <vector>

#include "slq/hmatrix.hpp"

namespace slq {

struct Segment {
  double duration = 0.0;
  double u = 0.0;
};

/// Piecewise-constant control; every duration must be positive.
struct ControlSignal {
  std::vector<Segment> segments;

  double total_duration() const;
};

void validate_signal(const ControlSignal& sig);

/// Per-segment record of a flow: the state after each segment and the largest
/// ||det| - 1| drift observed before renormalization.
struct FlowTrace {
  std::vector<HMatrix> states;
  double max_det_drift = 0.0;
};

/// Exact piecewise integration of g' = (A + u·B) g from g0: left-multiplies
/// by hexp(duration·(A + u·B)) per segment, renormalizing |det| each step.
HMatrix flow(const HMatrix& A, const HMatrix& B, const ControlSignal& sig,
             const HMatrix& g0, FlowTrace* trace = nullptr);

/// d-plane in H^n represented by an orthonormal n x d frame.
struct GrassmannPoint {
  int n = 0;
  int d = 0;
  HMatrix frame;  ///< n x d, columns orthonormal

  /// Coordinate plane spanned by the first d basis vectors.
  static GrassmannPoint coordinate(int n, int d);
};

/// Orthonormality residual ‖Fᴴ F - I‖.
double frame_residual(const GrassmannPoint& P);

/// Orthonormalize the columns of an n x d quaternionic matrix (modified
/// Gram-Schmidt, two passes). Throws if a column collapses.
HMatrix orthonormalize_frame(const HMatrix& F);

/// g acting on the plane: re-orthonormalized g·frame.
GrassmannPoint grassmann_act(const HMatrix& g, const GrassmannPoint& P);

/// Projector distance ‖F1·F1ᴴ - F2·F2ᴴ‖_F.
double grassmann_dist(const GrassmannPoint& P, const GrassmannPoint& Q);

struct ReachResult {
  double best_dist = 0.0;
  ControlSignal best_signal;  ///< empty when the identity candidate wins
  int evaluations = 0;
};

/// Randomized reachability probe from the identity: candidate signals with
/// heavy-tailed controls and log-uniform durations, refined around the best
/// find. Deterministic for fixed seed; best_dist is nonincreasing in budget.
ReachResult reach_probe(const HMatrix& A, const HMatrix& B, const HMatrix& target,
                        int budget, std::uint64_t seed);

}  // namespace slq

#endif
