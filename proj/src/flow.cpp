#include "slq/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "slq/rng.hpp"

namespace slq {

double ControlSignal::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

void validate_signal(const ControlSignal& sig) {
  for (const auto& s : sig.segments)
    if (!(s.duration > 0.0) || !std::isfinite(s.duration) || !std::isfinite(s.u))
      throw std::invalid_argument("ControlSignal: durations must be positive and finite");
  if (!(sig.total_duration() > 0.0))
    throw std::invalid_argument("ControlSignal: total duration must be positive");
}

HMatrix flow(const HMatrix& A, const HMatrix& B, const ControlSignal& sig,
             const HMatrix& g0, FlowTrace* trace) {
  if (A.n() != B.n() || A.n() != g0.n()) throw std::invalid_argument("flow: size mismatch");
  validate_signal(sig);
  HMatrix g = g0;
  for (const auto& s : sig.segments) {
    g = hexp((A + B * s.u) * s.duration) * g;
    if (trace)
      trace->max_det_drift = std::max(trace->max_det_drift,
                                      std::abs(study_det_abs(g) - 1.0));
    g = renormalize_det(g);
    if (trace) trace->states.push_back(g);
  }
  return g;
}

GrassmannPoint GrassmannPoint::coordinate(int n, int d) {
  if (d < 1 || d >= n) throw std::invalid_argument("GrassmannPoint: need 1 <= d < n");
  GrassmannPoint P;
  P.n = n;
  P.d = d;
  P.frame = HMatrix(n, d);
  for (int c = 0; c < d; ++c) P.frame(c, c) = kOne;
  return P;
}

double frame_residual(const GrassmannPoint& P) {
  HMatrix G = P.frame.adjoint() * P.frame;
  for (int c = 0; c < P.d; ++c) G(c, c) -= kOne;
  return G.frobenius_norm();
}

HMatrix orthonormalize_frame(const HMatrix& F) {
  const int n = F.rows(), d = F.cols();
  HMatrix U = F;
  for (int c = 0; c < d; ++c) {
    double orig = 0.0;
    for (int r = 0; r < n; ++r) orig += U(r, c).norm2();
    orig = std::sqrt(orig);
    for (int pass = 0; pass < 2; ++pass)
      for (int p = 0; p < c; ++p) {
        Quaternion inner;  // <u_p, u_c> = sum conj(u_p) u_c
        for (int r = 0; r < n; ++r) inner += U(r, p).conj() * U(r, c);
        for (int r = 0; r < n; ++r) U(r, c) -= U(r, p) * inner;
      }
    double nrm2 = 0.0;
    for (int r = 0; r < n; ++r) nrm2 += U(r, c).norm2();
    const double nrm = std::sqrt(nrm2);
    if (nrm <= 1e-12 * std::max(1.0, orig))
      throw std::runtime_error("orthonormalize_frame: rank collapse");
    const double inv = 1.0 / nrm;
    for (int r = 0; r < n; ++r) U(r, c) *= inv;
  }
  return U;
}

GrassmannPoint grassmann_act(const HMatrix& g, const GrassmannPoint& P) {
  if (g.n() != P.n) throw std::invalid_argument("grassmann_act: size mismatch");
  GrassmannPoint out;
  out.n = P.n;
  out.d = P.d;
  out.frame = orthonormalize_frame(g * P.frame);
  return out;
}

double grassmann_dist(const GrassmannPoint& P, const GrassmannPoint& Q) {
  if (P.n != Q.n || P.d != Q.d) throw std::invalid_argument("grassmann_dist: size mismatch");
  return (P.frame * P.frame.adjoint() - Q.frame * Q.frame.adjoint()).frobenius_norm();
}

namespace {

constexpr int kBatch = 64;

struct Candidate {
  ControlSignal sig;
  bool identity = false;
};

double heavy_tailed_u(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double u = std::tan(M_PI * (uni(eng) - 0.5));
  return std::clamp(u, -1e3, 1e3);
}

double log_uniform_duration(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> uni(std::log(1e-2), std::log(2.0));
  return std::exp(uni(eng));
}

/// Candidate for global index idx. Grows richer with the index so longer
/// budgets explore longer signals; never depends on the budget itself, which
/// keeps prefixes identical across budgets.
Candidate make_candidate(std::uint64_t seed, int idx, const ControlSignal& incumbent,
                         bool have_incumbent) {
  auto eng = make_engine(seed, static_cast<std::uint64_t>(idx) + 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Candidate cand;

  const bool refine = have_incumbent && !incumbent.segments.empty() && idx % 2 == 1;
  if (refine) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double temp = 1.0 / std::sqrt(1.0 + idx / 64.0);
    cand.sig = incumbent;
    for (auto& s : cand.sig.segments) {
      s.duration *= std::exp(0.25 * temp * gauss(eng));
      s.u += 0.5 * temp * gauss(eng);
    }
    return cand;
  }

  const int k_max = std::min(8, 2 + idx / 512);
  const int k = 1 + static_cast<int>(uni(eng) * k_max) % k_max;
  for (int i = 0; i < k; ++i)
    cand.sig.segments.push_back({log_uniform_duration(eng), heavy_tailed_u(eng)});
  return cand;
}

}  // namespace

ReachResult reach_probe(const HMatrix& A, const HMatrix& B, const HMatrix& target,
                        int budget, std::uint64_t seed) {
  const int n = A.n();
  if (B.n() != n || target.n() != n) throw std::invalid_argument("reach_probe: size mismatch");
  if (budget < 1) throw std::invalid_argument("reach_probe: budget >= 1 required");
  if (std::abs(study_det_abs(target) - 1.0) > 1e-6)
    throw std::invalid_argument("reach_probe: target must carry |det| = 1");

  const HMatrix id = HMatrix::identity(n);

  ReachResult best;
  best.best_dist = (id - target).frobenius_norm();  // empty-product candidate
  best.evaluations = 0;

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, 8));

  int done = 0;
  while (done < budget) {
    const int m = std::min(kBatch, budget - done);
    std::vector<double> dist(m, std::numeric_limits<double>::infinity());
    std::vector<Candidate> cands(m);
    for (int i = 0; i < m; ++i)
      cands[i] = make_candidate(seed, done + i, best.best_signal,
                                !best.best_signal.segments.empty());

    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (int i; (i = cursor.fetch_add(1)) < m;) {
          try {
            const HMatrix g = flow(A, B, cands[i].sig, id);
            const double d = (g - target).frobenius_norm();
            if (std::isfinite(d)) dist[i] = d;
          } catch (const std::exception&) {
            // overflowing exponentials: drop the candidate
          }
        }
      });
    for (auto& th : pool) th.join();

    // In-order reduction keeps the result independent of thread scheduling.
    for (int i = 0; i < m; ++i)
      if (dist[i] < best.best_dist) {
        best.best_dist = dist[i];
        best.best_signal = cands[i].sig;
      }
    done += m;
  }
  best.evaluations = done;
  return best;
}

}  // namespace slq
