#ifndef SLQ_CERTIFY_HPP
#define SLQ_CERTIFY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slq/hmatrix.hpp"
#include "slq/lie.hpp"

namespace slq {

enum class Verdict { Controllable, NotAccessible, Inconclusive };

const char* to_string(Verdict v);

struct CertifyOptions {
  double tol = 1e-9;
  int Q = 10000;       ///< resolution for the irrationality test
  int max_depth = 0;   ///< 0 = automatic
  std::uint64_t seed = 0;
};

struct H1Report {
  bool holds = false;
  int rank = 0;
  double margin = 0.0;
  bool stable = true;
};

/// Spectral-ordering condition on a complex-diagonal frame: strict real-part
/// gaps at both ends (ties allowed in the middle), nonzero imaginary parts at
/// both ends, and an end-ratio with no rational approximation p/q, q <= Q,
/// within 1/(2Q²).
struct H2Report {
  bool is_diagonal_frame = false;
  std::vector<double> a;
  std::vector<double> b;
  bool ordering_ok = false;
  bool b_ends_nonzero = false;
  bool ratio_irrational_at_resolution = false;
  int resolution_Q = 0;

  bool all() const { return ordering_ok && b_ends_nonzero && ratio_irrational_at_resolution; }
};

/// Corner-entry condition: entries (1,n) and (n,1) avoid H_{1,i} ∪ H_{j,k}.
struct H3Report {
  Quaternion p;
  Quaternion q;
  bool p_ok = false;
  bool q_ok = false;

  bool all() const { return p_ok && q_ok; }
};

/// Conjugation bringing B to canonical diagonal form g·B·g^{-1} = B_diag with
/// entries a_r + i·b_r, b_r >= 0, sorted by decreasing a then decreasing b.
struct CartanFrame {
  HMatrix g;
  HMatrix B_diag;
  double residual = 0.0;
};

class CartanError : public std::runtime_error {
 public:
  enum class Kind { NearDegenerate, Defective };
  CartanError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  H1Report h1;
  H2Report h2;
  H3Report h3;
  std::optional<CartanFrame> frame;
  std::string reason;  ///< populated for Inconclusive verdicts
  CertifyOptions config;
};

/// True iff some p/q with q <= Q approximates rho within 1/(2Q²). Decided via
/// continued-fraction convergents (any such witness is a convergent).
bool has_rational_approximation(double rho, int Q);

/// Evaluate the spectral-ordering condition. Throws std::invalid_argument if
/// B_diag is not complex-diagonal at tolerance.
H2Report check_h2(const HMatrix& B_diag, int Q = 10000, double tol = 1e-9);

/// Evaluate the corner-entry condition on A (n >= 2).
H3Report check_h3(const HMatrix& A, double tol = 1e-9);

/// Diagonalize a regular semisimple B through its complex adjoint. Throws
/// CartanError on defective or (near-)degenerate spectra.
CartanFrame diagonalize_cartan(const HMatrix& B, double tol = 1e-9);

/// (g·A·g^{-1}, g·B·g^{-1}); g must carry |det| = 1 and be invertible.
std::pair<HMatrix, HMatrix> conjugate_system(const HMatrix& A, const HMatrix& B,
                                             const HMatrix& g);

/// Full sufficient-condition certificate for the pair (A, B): rank condition,
/// then H2/H3 in the canonical diagonal frame of B. Diagonalization failures
/// degrade the verdict to Inconclusive, never to Controllable.
Certificate certify(const HMatrix& A, const HMatrix& B, const CertifyOptions& opts = {});

struct GenericStats {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int h1_count = 0;
  int controllable_count = 0;
  double h1_fraction = 0.0;
  double controllable_fraction = 0.0;
  int conjugation_checks = 0;
  bool conjugation_verdicts_stable = true;
};

/// Certify `trials` Gaussian pairs (parallel, per-trial derived seeds) and,
/// on the first Controllable pair, re-certify under random conjugations.
GenericStats sample_generic(int n, int trials, std::uint64_t seed,
                            const CertifyOptions& opts = {}, int conjugations = 100);

}  // namespace slq

#endif
