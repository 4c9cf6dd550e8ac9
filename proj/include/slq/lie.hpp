#ifndef SLQ_LIE_HPP
#define SLQ_LIE_HPP

#include <vector>

#include "slq/hmatrix.hpp"

namespace slq {

/// Numerically spanned subalgebra of sl(n,H).
struct Subalgebra {
  int ambient_n = 0;
  /// Orthonormal directions (as algebra elements) spanning the closure.
  std::vector<HMatrix> basis;
  int span_rank = 0;
  /// Longest bracket word among retained directions; generators count as 1.
  int closure_depth = 0;
  /// Smallest retained singular value over the largest, from one SVD of the
  /// unit-normalized accepted directions.
  double margin = 0.0;
  /// False iff max_depth was exhausted while the rank was still growing.
  bool stable = true;
};

/// Bracket closure of the generator span: repeatedly adjoins ad(generator)
/// applied to the newest directions, keeping those whose residual against
/// the span exceeds 1e-8 relative. max_depth caps the bracket word length;
/// 0 picks 2·(4n²-1)+1.
Subalgebra generated_subalgebra(const std::vector<HMatrix>& generators, int max_depth = 0);

/// Max residual of basis brackets outside the span, relative to the bracket
/// norm. Small for a genuinely closed basis.
double closure_residual(const Subalgebra& S);

struct LarcResult {
  bool holds = false;  ///< rank == 4n²-1
  int rank = 0;
  double margin = 0.0;
  bool stable = true;
};

/// Rank condition for the pair {A, B}.
LarcResult larc(const HMatrix& A, const HMatrix& B, int max_depth = 0);

/// Root-space component of a matrix relative to the diagonal Cartan algebra:
/// one entry per nonzero position, 1-based indices.
struct RootComponent {
  int r = 0;
  int s = 0;
  Quaternion entry;
};

std::vector<RootComponent> root_decompose(const HMatrix& A);
HMatrix assemble(const std::vector<RootComponent>& parts, int n);

/// e^{t·ad(B)} A. For B diagonal with complex entries a_r + i·b_r the flow is
/// entrywise exact: e^{t(a_r-a_s)} · e^{itb_r} A_{rs} e^{-itb_s}. Otherwise a
/// scaled truncated series is used; failure to converge throws.
HMatrix ad_flow(const HMatrix& B, const HMatrix& A, double t);

/// True iff B is diagonal with complex entries, up to tol relative.
bool is_complex_diagonal(const HMatrix& B, double tol = 1e-12);

}  // namespace slq

#endif
