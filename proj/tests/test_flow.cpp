#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "slq/flow.hpp"
#include "slq/rng.hpp"
#include "slq/verify.hpp"

using namespace slq;

namespace {

double dist(const HMatrix& A, const HMatrix& B) { return (A - B).frobenius_norm(); }

ControlSignal random_signal(std::uint64_t seed, int k) {
  auto eng = make_engine(seed, 0);
  // Durations stay short so a 100-segment product keeps cond(chi(g)) ~ 1e5;
  // beyond ~1e12 the determinant itself is no longer measurable and the
  // drift assertion below would be testing roundoff, not renormalization.
  std::uniform_real_distribution<double> dur(0.02, 0.10), u(-1.0, 1.0);
  ControlSignal sig;
  for (int i = 0; i < k; ++i) sig.segments.push_back({dur(eng), u(eng)});
  return sig;
}

}  // namespace

TEST_CASE("zero generators flow to the identity") {
  const HMatrix Z(2);
  const ControlSignal sig = random_signal(71, 5);
  const HMatrix g = flow(Z, Z, sig, HMatrix::identity(2));
  CHECK(dist(g, HMatrix::identity(2)) < 1e-14);
}

TEST_CASE("flow inverts by reversing segments on the negated system") {
  for (int t = 0; t < 8; ++t) {
    const HMatrix A = random_algebra_element(2, derive_seed(72, 2 * t));
    const HMatrix B = random_algebra_element(2, derive_seed(72, 2 * t + 1));
    const ControlSignal sig = random_signal(derive_seed(73, t), 6);
    const HMatrix g = flow(A, B, sig, HMatrix::identity(2));

    ControlSignal rev = sig;
    std::reverse(rev.segments.begin(), rev.segments.end());
    const HMatrix back = flow(A * -1.0, B * -1.0, rev, g);
    CHECK(dist(back, HMatrix::identity(2)) < 1e-9);
  }
}

TEST_CASE("flow composes over signal concatenation") {
  const HMatrix A = reference_A(), B = reference_B();
  ControlSignal s1 = random_signal(74, 4), s2 = random_signal(75, 3), joint = s1;
  joint.segments.insert(joint.segments.end(), s2.segments.begin(), s2.segments.end());
  const HMatrix g1 = flow(A, B, s1, HMatrix::identity(2));
  const HMatrix g12 = flow(A, B, s2, g1);
  CHECK(dist(g12, flow(A, B, joint, HMatrix::identity(2))) < 1e-12);
}

TEST_CASE("determinant drift stays tiny over a hundred segments") {
  const HMatrix A = reference_A(), B = reference_B();
  FlowTrace trace;
  const HMatrix g = flow(A, B, random_signal(76, 100), HMatrix::identity(2), &trace);
  CHECK(trace.states.size() == 100);
  CHECK(trace.max_det_drift <= 1e-8);
  // the determinant of the final state is only measurable to ~eps*cond(chi(g))
  CHECK(std::abs(study_det_abs(g) - 1.0) < 1e-9);
  CHECK(dist(trace.states.back(), g) == 0.0);
}

TEST_CASE("signals validate durations") {
  CHECK_THROWS(validate_signal(ControlSignal{{{0.0, 1.0}}}));
  CHECK_THROWS(validate_signal(ControlSignal{{{-0.5, 1.0}}}));
  CHECK_THROWS(validate_signal(ControlSignal{{}}));
  CHECK_NOTHROW(validate_signal(ControlSignal{{{0.5, -3.0}}}));
}

TEST_CASE("coordinate planes and frame orthonormalization") {
  const GrassmannPoint P = GrassmannPoint::coordinate(3, 1);
  CHECK(frame_residual(P) == 0.0);
  CHECK(P.frame(0, 0) == kOne);

  auto eng = make_engine(77, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    HMatrix F(4, 2);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 2; ++c) F(r, c) = {g(eng), g(eng), g(eng), g(eng)};
    const HMatrix U = orthonormalize_frame(F);
    GrassmannPoint Q{4, 2, U};
    CHECK(frame_residual(Q) < 1e-12);
  }
  // rank-deficient frames are rejected
  HMatrix flat(3, 2);
  flat(0, 0) = kOne;
  flat(0, 1) = kOne;
  CHECK_THROWS(orthonormalize_frame(flat));
}

TEST_CASE("group action on planes is projective and metric-compatible") {
  const GrassmannPoint P = GrassmannPoint::coordinate(3, 1);
  CHECK(grassmann_dist(P, P) == 0.0);
  for (int t = 0; t < 10; ++t) {
    const HMatrix h = random_group_element(3, derive_seed(78, t));
    const GrassmannPoint Q = grassmann_act(h, P);
    CHECK(frame_residual(Q) < 1e-10);
    // right-multiplying the frame by a unit quaternion fixes the plane
    HMatrix twisted = Q.frame;
    Quaternion u{0.5, 0.5, 0.5, 0.5};
    for (int r = 0; r < 3; ++r) twisted(r, 0) = twisted(r, 0) * u;
    CHECK(grassmann_dist(Q, GrassmannPoint{3, 1, twisted}) < 1e-12);
    CHECK(grassmann_dist(Q, P) >= 0.0);
  }
  // triangle inequality on random planes
  for (int t = 0; t < 10; ++t) {
    const GrassmannPoint X = grassmann_act(random_group_element(3, derive_seed(79, 3 * t)), P);
    const GrassmannPoint Y =
        grassmann_act(random_group_element(3, derive_seed(79, 3 * t + 1)), P);
    const GrassmannPoint Z =
        grassmann_act(random_group_element(3, derive_seed(79, 3 * t + 2)), P);
    CHECK(grassmann_dist(X, Z) <= grassmann_dist(X, Y) + grassmann_dist(Y, Z) + 1e-12);
    CHECK(grassmann_dist(X, Y) == doctest::Approx(grassmann_dist(Y, X)));
  }
}

TEST_CASE("reach probe is deterministic and monotone in the budget") {
  const HMatrix A = reference_A(), B = reference_B();
  const HMatrix target = random_group_element(2, 991);

  const ReachResult r1 = reach_probe(A, B, target, 256, 17);
  const ReachResult r2 = reach_probe(A, B, target, 256, 17);
  CHECK(r1.best_dist == r2.best_dist);
  CHECK(r1.evaluations == 256);

  const ReachResult r3 = reach_probe(A, B, target, 1024, 17);
  CHECK(r3.best_dist <= r1.best_dist);

  const ReachResult other = reach_probe(A, B, target, 256, 18);
  CHECK(other.best_dist != r1.best_dist);
}

TEST_CASE("reach probe handles the identity target and rejects bad ones") {
  const HMatrix A = reference_A(), B = reference_B();
  const ReachResult id = reach_probe(A, B, HMatrix::identity(2), 64, 3);
  CHECK(id.best_dist < 1e-12);
  CHECK(id.best_signal.segments.empty());

  CHECK_THROWS(reach_probe(A, B, reference_A(), 64, 3));
  CHECK_THROWS(reach_probe(A, B, HMatrix::identity(2), 0, 3));
}
