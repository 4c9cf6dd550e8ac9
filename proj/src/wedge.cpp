#include "slq/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "slq/certify.hpp"
#include "slq/flow.hpp"
#include "slq/lie.hpp"
#include "slq/rng.hpp"

namespace slq {

DecayTrace scaled_limit_trace(const HMatrix& A, const HMatrix& B_diag,
                              const std::vector<double>& t_grid, double tol) {
  const int n = B_diag.n();
  if (A.n() != n) throw std::invalid_argument("scaled_limit_trace: size mismatch");
  const H2Report h2 = check_h2(B_diag, 2, tol);
  if (!h2.ordering_ok)
    throw std::invalid_argument("scaled_limit_trace: end gaps of the real parts must be strict");
  if (t_grid.empty() || t_grid.front() < 0.0)
    throw std::invalid_argument("scaled_limit_trace: nonnegative grid required");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("scaled_limit_trace: grid must be strictly increasing");

  const double spread = h2.a.front() - h2.a.back();
  DecayTrace trace;
  trace.t_grid = t_grid;
  for (const double t : t_grid) {
    HMatrix R = ad_flow(B_diag, A, t) * std::exp(-t * spread);
    const double target = R(0, n - 1).norm();
    const double total2 = R.frobenius_norm() * R.frobenius_norm();
    trace.target_entry_norms.push_back(target);
    trace.off_target_norms.push_back(std::sqrt(std::max(0.0, total2 - target * target)));
  }

  // Least-squares slope of log(off) over the grid points that carry signal.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double off = trace.off_target_norms[i];
    if (off < 1e-280) continue;
    const double lx = t_grid[i], ly = std::log(off);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m >= 2 && std::abs(m * sxx - sx * sx) > 0.0)
    trace.fitted_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return trace;
}

double predicted_off_rate(const HMatrix& A, const HMatrix& B_diag) {
  const int n = B_diag.n();
  const double spread = B_diag(0, 0).w - B_diag(n - 1, n - 1).w;
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      if (r == 0 && s == n - 1) continue;
      if (A(r, s).is_zero()) continue;
      best = std::max(best, B_diag(r, r).w - B_diag(s, s).w - spread);
    }
  return best;
}

namespace {

double support_max(const Eigen::MatrixXd& X, const Eigen::Vector4d& d, int* argmax = nullptr) {
  Eigen::VectorXd prod = X * d;
  Eigen::Index idx = 0;
  const double h = prod.maxCoeff(&idx);
  if (argmax) *argmax = static_cast<int>(idx);
  return h;
}

/// Projected subgradient descent of d ↦ max_k <x_k, d> on the unit sphere.
double refine_direction(const Eigen::MatrixXd& X, Eigen::Vector4d& d) {
  d.normalize();
  int arg = 0;
  double h = support_max(X, d, &arg);
  for (int iter = 0; iter < 120; ++iter) {
    const Eigen::Vector4d g = X.row(arg).transpose();
    double eta = 0.5;
    bool improved = false;
    while (eta > 1e-12) {
      Eigen::Vector4d cand = (d - eta * g).normalized();
      int carg = 0;
      const double ch = support_max(X, cand, &carg);
      if (ch < h - 1e-15) {
        d = cand;
        h = ch;
        arg = carg;
        improved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!improved) break;
  }
  return h;
}

/// If the near-active samples of d form a supporting facet, return its exact
/// offset; otherwise fall back to the refined support value.
double polish_facet(const Eigen::MatrixXd& X, const Eigen::Vector4d& d, double h) {
  Eigen::VectorXd prod = X * d;
  std::vector<int> act;
  for (int k = 0; k < prod.size(); ++k)
    if (prod(k) >= h - 1e-6) act.push_back(k);
  if (act.size() < 4) return h;

  Eigen::MatrixXd Apts(static_cast<int>(act.size()), 4);
  for (std::size_t i = 0; i < act.size(); ++i) Apts.row(static_cast<int>(i)) = X.row(act[i]);
  const Eigen::RowVector4d centroid = Apts.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Apts.rowwise() - centroid, Eigen::ComputeFullV);
  Eigen::Vector4d normal = svd.matrixV().col(3);
  double c = centroid.dot(normal);
  if (c < 0.0) {
    normal = -normal;
    c = -c;
  }
  if (c <= 0.0) return h;
  const double viol = support_max(X, normal) - c;
  if (viol > 1e-9) return h;
  return std::min(h, c);
}

}  // namespace

ConeResult torus_cone_full(const Quaternion& q, double c1, double c2, int samples) {
  if (samples < 8) throw std::invalid_argument("torus_cone_full: samples >= 8 required");
  if (c1 == 0.0 || c2 == 0.0)
    throw std::invalid_argument("torus_cone_full: nonzero rotation speeds required");
  const double qn = q.norm();
  if (qn == 0.0) return {false, 0.0};

  // Equispaced samples over C whole periods of the slower phase. C is forced
  // coprime to the sample count so neither rotation aliases onto a few phases.
  int C = std::clamp(samples / 8, 3, 1000);
  while (C > 1 && std::gcd(C, samples) != 1) --C;
  const double T = 2.0 * M_PI * C * std::max(1.0 / std::abs(c1), 1.0 / std::abs(c2));

  Eigen::MatrixXd X(samples, 4);
  for (int k = 0; k < samples; ++k) {
    const double t = T * k / samples;
    const Quaternion r = circle_conjugate(t * c1, t * c2, q);
    X(k, 0) = r.w / qn;
    X(k, 1) = r.x / qn;
    X(k, 2) = r.y / qn;
    X(k, 3) = r.z / qn;
  }

  // A curve confined to a proper subspace cannot generate all of H.
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const auto& sv = svd.singularValues();
    if (sv(3) < 1e-8 * sv(0)) return {false, 0.0};
  }

  // Support-function minimization: fixed-seed direction net, then local
  // refinement of the most separating directions.
  constexpr int kNet = 4096;
  auto eng = make_engine(0x0c0ffee1u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd D(4, kNet + 8);
  for (int j = 0; j < kNet; ++j) {
    Eigen::Vector4d v(gauss(eng), gauss(eng), gauss(eng), gauss(eng));
    const double nv = v.norm();
    D.col(j) = nv > 0 ? (v / nv).eval() : Eigen::Vector4d::UnitX();
  }
  for (int ax = 0; ax < 4; ++ax) {
    D.col(kNet + 2 * ax) = Eigen::Vector4d::Unit(ax);
    D.col(kNet + 2 * ax + 1) = -Eigen::Vector4d::Unit(ax);
  }

  const Eigen::MatrixXd H = X * D;
  Eigen::VectorXd hvals = H.colwise().maxCoeff();

  std::vector<int> order(hvals.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + 24, order.end(),
                    [&](int i, int j) { return hvals(i) < hvals(j); });

  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 24; ++i) {
    Eigen::Vector4d d = D.col(order[static_cast<std::size_t>(i)]);
    double h = refine_direction(X, d);
    h = polish_facet(X, d, h);
    margin = std::min(margin, h);
  }

  ConeResult out;
  out.full = margin > 1e-7;
  out.margin = std::max(0.0, margin);
  return out;
}

std::vector<HMatrix> sl2_basis(int n, int r, int s) {
  if (r < 1 || s <= r || s > n) throw std::invalid_argument("sl2_basis: need 1 <= r < s <= n");
  const int a = r - 1, b = s - 1;
  const Quaternion units[4] = {kOne, kI, kJ, kK};
  std::vector<HMatrix> basis;
  for (const auto& u : units) {
    HMatrix E(n);
    E(a, b) = u;
    basis.push_back(E);
    HMatrix F(n);
    F(b, a) = u;
    basis.push_back(F);
  }
  HMatrix Hd(n);
  Hd(a, a) = kOne;
  Hd(b, b) = -kOne;
  basis.push_back(Hd);
  for (int which = 0; which < 2; ++which)
    for (int c = 1; c < 4; ++c) {
      HMatrix E(n);
      E(which == 0 ? a : b, which == 0 ? a : b) = units[c];
      basis.push_back(E);
    }
  return basis;
}

HomotopyCheck verify_conjugation_homotopy(int n, int d) {
  if (n < 2 || d < 1 || d >= n)
    throw std::invalid_argument("verify_conjugation_homotopy: need n >= 2, 1 <= d < n");

  HMatrix A(n), B(n);
  if (d != 1) {
    A(d - 1, 0) = kOne;   // A e_1 = e_d
    A(0, d - 1) = -kOne;  // A e_d = -e_1
  }
  if (d + 1 != n) {
    B(n - 1, d) = kOne;   // B e_{d+1} = e_n
    B(d, n - 1) = -kOne;  // B e_n = -e_{d+1}
  }

  const auto P_at = [&](double t) { return hexp(A * t) * hexp(B * t); };

  HomotopyCheck check;

  const HMatrix P = P_at(M_PI / 2.0);
  const HMatrix Pi = inverse(P);
  for (const auto& X : sl2_basis(n, d, d + 1)) {
    const HMatrix Y = P * X * Pi;
    double off2 = 0.0;
    for (int rr = 0; rr < n; ++rr)
      for (int ss = 0; ss < n; ++ss) {
        const bool inside = (rr == 0 || rr == n - 1) && (ss == 0 || ss == n - 1);
        if (!inside) off2 += Y(rr, ss).norm2();
      }
    const double yn = Y.frobenius_norm();
    if (yn > 0.0) check.ad_residual = std::max(check.ad_residual, std::sqrt(off2) / yn);
  }

  const GrassmannPoint Vd = GrassmannPoint::coordinate(n, d);
  for (int k = 0; k <= 16; ++k) {
    const double t = (M_PI / 2.0) * k / 16.0;
    const double dist = grassmann_dist(grassmann_act(P_at(t), Vd), Vd);
    check.fixes_vd_residual = std::max(check.fixes_vd_residual, dist);
  }
  return check;
}

namespace {

std::vector<HMatrix> full_algebra_basis(int n) {
  const Quaternion units[4] = {kOne, kI, kJ, kK};
  std::vector<HMatrix> basis;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      if (r == s) continue;
      for (const auto& u : units) {
        HMatrix E(n);
        E(r, s) = u;
        basis.push_back(E);
      }
    }
  for (int r = 0; r < n; ++r)
    for (int c = 1; c < 4; ++c) {
      HMatrix E(n);
      E(r, r) = units[c];
      basis.push_back(E);
    }
  for (int r = 0; r + 1 < n; ++r) {
    HMatrix E(n);
    E(r, r) = kOne;
    E(r + 1, r + 1) = -kOne;
    basis.push_back(E);
  }
  return basis;
}

}  // namespace

OrbitTangentRank orbit_tangent_rank(int n, int d, bool full_algebra) {
  if (n < 2 || d < 1 || d >= n)
    throw std::invalid_argument("orbit_tangent_rank: need n >= 2, 1 <= d < n");

  const GrassmannPoint Vd = GrassmannPoint::coordinate(n, d);
  const HMatrix& F = Vd.frame;
  const std::vector<HMatrix> basis =
      full_algebra ? full_algebra_basis(n) : sl2_basis(n, 1, n);

  Eigen::MatrixXd Tg(static_cast<int>(basis.size()), 4 * n * d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    HMatrix tangent = basis[i] * F;
    tangent -= F * (F.adjoint() * tangent);  // mod the plane itself
    Tg.row(static_cast<int>(i)) = vectorize(tangent).transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Tg);
  OrbitTangentRank out;
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * smax) ++out.rank;
  return out;
}

}  // namespace slq
