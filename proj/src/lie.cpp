#include "slq/lie.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace slq {

namespace {

constexpr double kSpanTol = 1e-8;

/// Incremental modified Gram-Schmidt span with re-orthogonalization.
class SpanBuilder {
 public:
  explicit SpanBuilder(int dim) : dim_(dim) {}

  /// Returns true and stores the normalized residual direction when v adds a
  /// dimension (relative residual > kSpanTol).
  bool try_add(Eigen::VectorXd v) {
    const double scale = v.norm();
    if (!(scale > 0.0)) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : ortho_) v -= u.dot(v) * u;
    if (v.norm() <= kSpanTol * scale) return false;
    ortho_.push_back(v.normalized());
    return true;
  }

  int rank() const { return static_cast<int>(ortho_.size()); }
  const std::vector<Eigen::VectorXd>& directions() const { return ortho_; }

  double residual_outside(Eigen::VectorXd v) const {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : ortho_) v -= u.dot(v) * u;
    return v.norm();
  }

 private:
  int dim_;
  std::vector<Eigen::VectorXd> ortho_;
};

}  // namespace

Subalgebra generated_subalgebra(const std::vector<HMatrix>& generators, int max_depth) {
  if (generators.empty())
    throw std::invalid_argument("generated_subalgebra: empty generator list");
  const int n = generators.front().n();
  for (const auto& g : generators)
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("generated_subalgebra: generator size mismatch");

  const int dim_full = 4 * n * n - 1;
  if (max_depth <= 0) max_depth = 2 * dim_full + 1;

  SpanBuilder span(4 * n * n);
  std::vector<Eigen::VectorXd> accepted;  // raw directions, for the final SVD
  std::vector<HMatrix> frontier;

  for (const auto& g : generators) {
    Eigen::VectorXd v = vectorize(g);
    if (span.try_add(v)) {
      accepted.push_back(v);
      frontier.push_back(g);
    }
  }

  Subalgebra out;
  out.ambient_n = n;
  int depth = frontier.empty() ? 0 : 1;

  // Bracket words of length `len` come from the frontier of length len-1;
  // frontier-only expansion is complete because rejected candidates already
  // lie in the span of earlier words.
  for (int len = 2; len <= max_depth && span.rank() < dim_full; ++len) {
    std::vector<HMatrix> next;
    for (const auto& b : frontier)
      for (const auto& g : generators) {
        HMatrix c = bracket(g, b);
        Eigen::VectorXd v = vectorize(c);
        if (span.try_add(v)) {
          accepted.push_back(v);
          next.push_back(c);
        }
      }
    if (next.empty()) break;
    depth = len;
    frontier = std::move(next);
  }

  bool stable = true;
  if (span.rank() < dim_full) {
    // Did the span really stop growing, or did the cap cut it short?
    for (const auto& b : frontier) {
      for (const auto& g : generators) {
        const HMatrix c = bracket(g, b);
        if (span.residual_outside(vectorize(c)) >
            kSpanTol * std::max(1.0, c.frobenius_norm())) {
          stable = false;
          break;
        }
      }
      if (!stable) break;
    }
  }

  out.closure_depth = depth;
  out.stable = stable;

  if (!accepted.empty()) {
    Eigen::MatrixXd V(static_cast<int>(accepted.size()), 4 * n * n);
    for (int i = 0; i < V.rows(); ++i) V.row(i) = accepted[i].normalized().transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    int rank = 0;
    double smin = smax;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > kSpanTol * smax) {
        ++rank;
        smin = sv(i);
      }
    out.span_rank = rank;
    out.margin = smax > 0.0 ? smin / smax : 0.0;
  }

  for (const auto& u : span.directions()) out.basis.push_back(from_vector(u, n));
  return out;
}

double closure_residual(const Subalgebra& S) {
  SpanBuilder span(4 * S.ambient_n * S.ambient_n);
  for (const auto& b : S.basis) span.try_add(vectorize(b));
  double worst = 0.0;
  for (const auto& x : S.basis)
    for (const auto& y : S.basis) {
      HMatrix c = bracket(x, y);
      const double cn = c.frobenius_norm();
      if (cn == 0.0) continue;
      worst = std::max(worst, span.residual_outside(vectorize(c)) / cn);
    }
  return worst;
}

LarcResult larc(const HMatrix& A, const HMatrix& B, int max_depth) {
  if (A.n() != B.n()) throw std::invalid_argument("larc: size mismatch");
  const Subalgebra S = generated_subalgebra({A, B}, max_depth);
  LarcResult r;
  r.rank = S.span_rank;
  r.margin = S.margin;
  r.stable = S.stable;
  r.holds = S.span_rank == 4 * S.ambient_n * S.ambient_n - 1;
  return r;
}

std::vector<RootComponent> root_decompose(const HMatrix& A) {
  std::vector<RootComponent> parts;
  for (int r = 0; r < A.n(); ++r)
    for (int s = 0; s < A.n(); ++s)
      if (!A(r, s).is_zero()) parts.push_back({r + 1, s + 1, A(r, s)});
  return parts;
}

HMatrix assemble(const std::vector<RootComponent>& parts, int n) {
  HMatrix A(n);
  for (const auto& p : parts) {
    if (p.r < 1 || p.r > n || p.s < 1 || p.s > n)
      throw std::invalid_argument("assemble: component index out of range");
    A(p.r - 1, p.s - 1) += p.entry;
  }
  return A;
}

bool is_complex_diagonal(const HMatrix& B, double tol) {
  const int n = B.n();
  const double scale = std::max(1.0, B.frobenius_norm());
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      const Quaternion& q = B(r, s);
      if (r != s) {
        if (q.norm() > tol * scale) return false;
      } else if (std::hypot(q.y, q.z) > tol * scale) {
        return false;
      }
    }
  return true;
}

HMatrix ad_flow(const HMatrix& B, const HMatrix& A, double t) {
  const int n = B.n();
  if (A.n() != n) throw std::invalid_argument("ad_flow: size mismatch");

  if (is_complex_diagonal(B)) {
    HMatrix R(n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        if (A(r, s).is_zero()) continue;
        const double ar = B(r, r).w, as = B(s, s).w;
        const double br = B(r, r).x, bs = B(s, s).x;
        R(r, s) = std::exp(t * (ar - as)) * circle_conjugate(t * br, t * bs, A(r, s));
      }
    return R;
  }

  // General B: scaled truncated commutator series, then repeated application.
  const double lam = std::abs(t) * 2.0 * B.frobenius_norm();
  int m = 0;
  while (lam > std::ldexp(1.0, m) && m < 40) ++m;
  const double tau = t / std::ldexp(1.0, m);
  const long reps = 1L << m;

  HMatrix R = A;
  for (long rep = 0; rep < reps; ++rep) {
    HMatrix sum = R;
    HMatrix term = R;
    bool converged = false;
    for (int k = 1; k <= 40; ++k) {
      term = bracket(B, term) * (tau / k);
      sum += term;
      if (term.frobenius_norm() <= 1e-17 * std::max(1.0, sum.frobenius_norm())) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("ad_flow: series residual above tolerance");
    R = sum;
  }
  return R;
}

}  // namespace slq
