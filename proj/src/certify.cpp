#include "slq/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numeric>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "slq/rng.hpp"

namespace slq {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Controllable: return "Controllable";
    case Verdict::NotAccessible: return "NotAccessible";
    default: return "Inconclusive";
  }
}

bool has_rational_approximation(double rho, int Q) {
  if (!std::isfinite(rho)) return false;
  const double window = 1.0 / (2.0 * static_cast<double>(Q) * Q);
  // Walk the continued-fraction convergents p_k/q_k; by the classical
  // best-approximation theorem any p/q with |rho - p/q| < 1/(2q²) is a
  // convergent, and our window is at most that for q <= Q.
  double x = rho;
  double p_prev = 1.0, p_pprev = 0.0;
  double q_prev = 0.0, q_pprev = 1.0;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    const double p = a * p_prev + p_pprev;
    const double q = a * q_prev + q_pprev;
    if (q > static_cast<double>(Q)) break;
    if (q >= 1.0 && std::abs(rho - p / q) < window) return true;
    const double frac = x - a;
    if (frac < 1e-15 * std::max(1.0, std::abs(a))) break;
    x = 1.0 / frac;
    p_pprev = p_prev; p_prev = p;
    q_pprev = q_prev; q_prev = q;
  }
  return false;
}

H2Report check_h2(const HMatrix& B_diag, int Q, double tol) {
  const int n = B_diag.n();
  if (!is_complex_diagonal(B_diag, std::max(tol, 1e-12)))
    throw std::invalid_argument("check_h2: complex diagonal frame required");

  H2Report rep;
  rep.is_diagonal_frame = true;
  rep.resolution_Q = Q;
  rep.a.resize(n);
  rep.b.resize(n);
  double scale = 0.0;
  for (int r = 0; r < n; ++r) {
    rep.a[r] = B_diag(r, r).w;
    rep.b[r] = B_diag(r, r).x;
    scale = std::max(scale, B_diag(r, r).norm());
  }
  const double gap = tol * std::max(1.0, scale);

  bool ordering = n >= 2 && rep.a[0] - rep.a[1] > gap && rep.a[n - 2] - rep.a[n - 1] > gap;
  for (int r = 1; r + 2 < n && ordering; ++r)
    if (rep.a[r] < rep.a[r + 1] - gap) ordering = false;
  rep.ordering_ok = ordering;

  rep.b_ends_nonzero = std::abs(rep.b[0]) > gap && std::abs(rep.b[n - 1]) > gap;

  if (rep.b[n - 1] != 0.0)
    rep.ratio_irrational_at_resolution =
        !has_rational_approximation(rep.b[0] / rep.b[n - 1], Q);
  return rep;
}

H3Report check_h3(const HMatrix& A, double tol) {
  const int n = A.n();
  if (n < 2) throw std::invalid_argument("check_h3: n >= 2 required");
  H3Report rep;
  rep.p = A(0, n - 1);
  rep.q = A(n - 1, 0);
  rep.p_ok = !in_forbidden_union(rep.p, tol);
  rep.q_ok = !in_forbidden_union(rep.q, tol);
  return rep;
}

CartanFrame diagonalize_cartan(const HMatrix& B, double tol) {
  const int n = B.n();
  const Eigen::MatrixXcd C = complex_adjoint(B);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, true);
  if (es.info() != Eigen::Success)
    throw CartanError(CartanError::Kind::Defective, "eigensolver failed to converge");

  const Eigen::MatrixXcd& vecs = es.eigenvectors();
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(sv.size() - 1) < 1e-8 * sv(0))
      throw CartanError(CartanError::Kind::Defective,
                        "eigenvector system is numerically singular (non-semisimple input)");
  }

  // Greedily pair each eigenvalue with its quaternionic conjugate partner and
  // keep the member with the larger imaginary part as the class representative.
  const int m = 2 * n;
  std::vector<bool> used(m, false);
  std::vector<int> rep_idx;
  for (int i = 0; i < m; ++i) {
    if (used[i]) continue;
    used[i] = true;
    int best = -1;
    double best_d = 0.0;
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      const double d = std::abs(es.eigenvalues()(j) - std::conj(es.eigenvalues()(i)));
      if (best < 0 || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best < 0)
      throw CartanError(CartanError::Kind::Defective, "unpaired eigenvalue");
    used[best] = true;
    rep_idx.push_back(es.eigenvalues()(i).imag() >= es.eigenvalues()(best).imag() ? i : best);
  }

  std::sort(rep_idx.begin(), rep_idx.end(), [&](int i, int j) {
    const auto li = es.eigenvalues()(i), lj = es.eigenvalues()(j);
    if (li.real() != lj.real()) return li.real() > lj.real();
    return li.imag() > lj.imag();
  });

  double spec_scale = 0.0;
  for (int i : rep_idx) spec_scale = std::max(spec_scale, std::abs(es.eigenvalues()(i)));
  for (std::size_t i = 0; i < rep_idx.size(); ++i)
    for (std::size_t j = i + 1; j < rep_idx.size(); ++j) {
      const double d =
          std::abs(es.eigenvalues()(rep_idx[i]) - es.eigenvalues()(rep_idx[j]));
      if (d < 1e-6 * std::max(spec_scale, 1e-300))
        throw CartanError(CartanError::Kind::NearDegenerate,
                          "eigenvalue classes closer than 1e-6 relative");
    }
  if (spec_scale < 1e-12 * std::max(1.0, B.frobenius_norm()))
    throw CartanError(CartanError::Kind::NearDegenerate, "spectrum is numerically zero");

  // Column r of V is the quaternionic right-eigenvector pulled back from the
  // complex eigenvector u: component_m = u(2m) - conj(u(2m+1))·j.
  HMatrix V(n);
  HMatrix D(n);
  for (int r = 0; r < n; ++r) {
    const int idx = rep_idx[static_cast<std::size_t>(r)];
    const auto lambda = es.eigenvalues()(idx);
    D(r, r) = {lambda.real(), lambda.imag(), 0.0, 0.0};
    Eigen::VectorXcd u = es.eigenvectors().col(idx);
    double colnorm2 = 0.0;
    for (int mm = 0; mm < n; ++mm) {
      const std::complex<double> z1 = u(2 * mm);
      const std::complex<double> z2 = -std::conj(u(2 * mm + 1));
      V(mm, r) = {z1.real(), z1.imag(), z2.real(), z2.imag()};
      colnorm2 += V(mm, r).norm2();
    }
    const double inv = 1.0 / std::sqrt(colnorm2);
    for (int mm = 0; mm < n; ++mm) V(mm, r) *= inv;
  }

  const double sdet = study_det_abs(V);
  if (sdet < 1e-12)
    throw CartanError(CartanError::Kind::Defective, "eigenvector frame is singular");
  V *= std::pow(sdet, -1.0 / n);

  CartanFrame frame;
  frame.g = inverse(V);
  frame.B_diag = D;
  frame.residual = (frame.g * B * V - D).frobenius_norm() /
                   std::max(B.frobenius_norm(), 1e-300);
  (void)tol;
  return frame;
}

std::pair<HMatrix, HMatrix> conjugate_system(const HMatrix& A, const HMatrix& B,
                                             const HMatrix& g) {
  if (A.n() != B.n() || A.n() != g.n())
    throw std::invalid_argument("conjugate_system: size mismatch");
  if (std::abs(study_det_abs(g) - 1.0) > 1e-8)
    throw std::invalid_argument("conjugate_system: |det g| must be 1");
  const HMatrix gi = inverse(g);
  return {g * A * gi, g * B * gi};
}

Certificate certify(const HMatrix& A, const HMatrix& B, const CertifyOptions& opts) {
  if (A.n() != B.n()) throw std::invalid_argument("certify: size mismatch");
  if (A.n() < 2) throw std::invalid_argument("certify: n >= 2 required");

  Certificate cert;
  cert.config = opts;

  const LarcResult h1 = larc(A, B, opts.max_depth);
  cert.h1 = {h1.holds, h1.rank, h1.margin, h1.stable};
  cert.h2.resolution_Q = opts.Q;

  if (!h1.stable) {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = "bracket closure did not stabilize within max_depth";
    return cert;
  }
  if (!h1.holds) {
    cert.verdict = Verdict::NotAccessible;
    cert.reason = "rank condition fails: generated subalgebra is proper";
    return cert;
  }

  try {
    CartanFrame frame = diagonalize_cartan(B, opts.tol);
    cert.h2 = check_h2(frame.B_diag, opts.Q, opts.tol);
    const HMatrix Ag = frame.g * A * inverse(frame.g);
    cert.h3 = check_h3(Ag, opts.tol);
    cert.frame = std::move(frame);
  } catch (const CartanError& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = std::string("diagonalization failed: ") + e.what();
    return cert;
  }

  if (cert.h2.all() && cert.h3.all()) {
    cert.verdict = Verdict::Controllable;
  } else {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = "sufficient conditions not met in the canonical frame";
  }
  return cert;
}

GenericStats sample_generic(int n, int trials, std::uint64_t seed,
                            const CertifyOptions& opts, int conjugations) {
  if (trials < 1) throw std::invalid_argument("sample_generic: trials >= 1 required");
  if (n < 2) throw std::invalid_argument("sample_generic: n >= 2 required");

  GenericStats stats;
  stats.n = n;
  stats.trials = trials;
  stats.seed = seed;

  std::vector<Verdict> verdicts(trials);
  std::vector<char> holds(trials, 0);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, 8));
  std::vector<std::thread> pool;
  std::atomic<int> cursor{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (int t; (t = cursor.fetch_add(1)) < trials;) {
        const HMatrix A = random_algebra_element(n, derive_seed(seed, 2 * t));
        const HMatrix B = random_algebra_element(n, derive_seed(seed, 2 * t + 1));
        const Certificate c = certify(A, B, opts);
        verdicts[t] = c.verdict;
        holds[t] = c.h1.holds ? 1 : 0;
      }
    });
  for (auto& th : pool) th.join();

  int first_controllable = -1;
  for (int t = 0; t < trials; ++t) {
    if (holds[t]) ++stats.h1_count;
    if (verdicts[t] == Verdict::Controllable) {
      ++stats.controllable_count;
      if (first_controllable < 0) first_controllable = t;
    }
  }
  stats.h1_fraction = static_cast<double>(stats.h1_count) / trials;
  stats.controllable_fraction = static_cast<double>(stats.controllable_count) / trials;

  if (first_controllable >= 0 && conjugations > 0) {
    const HMatrix A = random_algebra_element(n, derive_seed(seed, 2 * first_controllable));
    const HMatrix B = random_algebra_element(n, derive_seed(seed, 2 * first_controllable + 1));
    for (int k = 0; k < conjugations; ++k) {
      const HMatrix g = random_group_element(n, derive_seed(seed, 1000003ULL + k));
      auto [Ac, Bc] = conjugate_system(A, B, g);
      ++stats.conjugation_checks;
      if (certify(Ac, Bc, opts).verdict != Verdict::Controllable)
        stats.conjugation_verdicts_stable = false;
    }
  }
  return stats;
}

}  // namespace slq
