#include <doctest.h>

#include <random>

#include "slq/quaternion.hpp"
#include "slq/rng.hpp"

using namespace slq;

namespace {

Quaternion random_quat(std::mt19937_64& eng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(eng), g(eng), g(eng), g(eng)};
}

double dist(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("hamilton multiplication table") {
  CHECK(kI * kI == -kOne);
  CHECK(kJ * kJ == -kOne);
  CHECK(kK * kK == -kOne);
  CHECK(kI * kJ == kK);
  CHECK(kJ * kK == kI);
  CHECK(kK * kI == kJ);
  CHECK(kJ * kI == -kK);
}

TEST_CASE("ring laws on random triples") {
  auto eng = make_engine(11, 0);
  for (int t = 0; t < 200; ++t) {
    const Quaternion a = random_quat(eng), b = random_quat(eng), c = random_quat(eng);
    CHECK(dist((a * b) * c, a * (b * c)) < 1e-12);
    CHECK(dist(a * (b + c), a * b + a * c) < 1e-12);
    CHECK(dist((a + b) * c, a * c + b * c) < 1e-12);
    CHECK(dist((a * b).conj(), b.conj() * a.conj()) < 1e-12);
    CHECK(std::abs((a * b).norm() - a.norm() * b.norm()) < 1e-12);
    CHECK(dist(a.conj() * a, Quaternion::real(a.norm2())) < 1e-12);
  }
}

TEST_CASE("split decomposes exactly") {
  auto eng = make_engine(12, 0);
  for (int t = 0; t < 100; ++t) {
    const Quaternion q = random_quat(eng);
    const QuatSplit s = split(q);
    CHECK(s.part_1i + s.part_jk == q);
    CHECK(s.part_1i.y == 0.0);
    CHECK(s.part_1i.z == 0.0);
    CHECK(s.part_jk.w == 0.0);
    CHECK(s.part_jk.x == 0.0);
  }
}

TEST_CASE("forbidden union membership") {
  CHECK(in_forbidden_union(kOne));
  CHECK(in_forbidden_union(kI));
  CHECK(in_forbidden_union(kOne + kI));
  CHECK(in_forbidden_union(kJ));
  CHECK(in_forbidden_union(kK));
  CHECK(in_forbidden_union(kJ - 2.0 * kK));
  CHECK(in_forbidden_union(Quaternion{}));
  CHECK_FALSE(in_forbidden_union(kOne + kJ));
  CHECK_FALSE(in_forbidden_union(kI + kK));
  CHECK_FALSE(in_forbidden_union(Quaternion{1, 2, 3, 4}));

  // scale invariance
  const Quaternion q{1, 0, 1e-10, 0};
  CHECK(in_forbidden_union(q));
  CHECK(in_forbidden_union(q * 1e8));
  CHECK(in_forbidden_union(q * 1e-8));
}

TEST_CASE("circle conjugation preserves norm and is 2pi-periodic") {
  auto eng = make_engine(13, 0);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (int t = 0; t < 100; ++t) {
    const Quaternion q = random_quat(eng);
    const double a = uni(eng), b = uni(eng);
    const Quaternion r = circle_conjugate(a, b, q);
    CHECK(std::abs(r.norm() - q.norm()) < 1e-12 * (1.0 + q.norm()));
    CHECK(dist(r, circle_conjugate(a + 2 * M_PI, b, q)) < 1e-10);
    CHECK(dist(circle_conjugate(0.0, 0.0, q), q) < 1e-15);
  }
}

TEST_CASE("tangent pair formulas and split identities") {
  auto eng = make_engine(14, 0);
  for (int t = 0; t < 200; ++t) {
    const Quaternion q = random_quat(eng);
    const TangentPair tp = tangent_pair(q);
    CHECK(tp.v1 == kI * q);
    CHECK(tp.v2 == -(q * kI));
    // v1 - v2 = i q + q i lands in H_{1,i}; v1 + v2 = i q - q i in H_{j,k}.
    const Quaternion d = tp.v1 - tp.v2;
    const Quaternion s = tp.v1 + tp.v2;
    CHECK(std::abs(d.y) < 1e-14);
    CHECK(std::abs(d.z) < 1e-14);
    CHECK(std::abs(s.w) < 1e-14);
    CHECK(std::abs(s.x) < 1e-14);
  }
}

TEST_CASE("tangent independence matches forbidden-union complement") {
  auto eng = make_engine(15, 0);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const Quaternion q = random_quat(eng);
    CHECK(tangent_pair(q).independent == !in_forbidden_union(q));
    ++checked;
  }
  CHECK(checked == 1000);

  // members of either plane always have dependent tangents
  CHECK_FALSE(tangent_pair(kOne + kI).independent);
  CHECK_FALSE(tangent_pair(kJ + 0.5 * kK).independent);
  CHECK(tangent_pair(kOne + kJ).independent);
}
