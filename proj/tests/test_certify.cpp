#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slq/certify.hpp"
#include "slq/rng.hpp"
#include "slq/verify.hpp"

using namespace slq;

TEST_CASE("rational approximation detector agrees with the exhaustive scan") {
  auto eng = make_engine(51, 0);
  std::uniform_real_distribution<double> uni(0.0, 4.0);
  for (const int Q : {50, 200, 1000}) {
    for (int t = 0; t < 200; ++t) {
      const double rho = uni(eng);
      CHECK(has_rational_approximation(rho, Q) == oracles::rational_scan(rho, Q));
    }
    // exact rationals and near-rationals on both sides of the window
    CHECK(has_rational_approximation(3.0 / 7.0, Q));
    CHECK(has_rational_approximation(3.0 / 7.0 + 0.2 / (Q * double(Q)), Q));
    CHECK(has_rational_approximation(2.0, Q));
  }
}

TEST_CASE("reference frequency ratio is irrational at the working resolution") {
  const double rho = 1.0 / std::sqrt(2.0);
  CHECK_FALSE(has_rational_approximation(rho, 10000));
  CHECK_FALSE(oracles::rational_scan(rho, 10000));
  // golden ratio is the worst approximable number; never flagged
  CHECK_FALSE(has_rational_approximation((1.0 + std::sqrt(5.0)) / 2.0, 10000));
  // sqrt(2) truncated to a convergent IS flagged
  CHECK(has_rational_approximation(5741.0 / 8119.0, 10000));
}

TEST_CASE("spectral ordering flags on the reference frame") {
  const H2Report r = check_h2(reference_B());
  CHECK(r.is_diagonal_frame);
  CHECK(r.ordering_ok);
  CHECK(r.b_ends_nonzero);
  CHECK(r.ratio_irrational_at_resolution);
  CHECK(r.all());
  CHECK(r.a[0] == 1.0);
  CHECK(r.a[1] == -1.0);
  CHECK(r.resolution_Q == 10000);
}

TEST_CASE("spectral ordering rejects end ties, middle ties pass") {
  HMatrix tie(2);
  tie(0, 0) = Quaternion::complex(1.0, 1.0);
  tie(1, 1) = Quaternion::complex(1.0, std::sqrt(2.0));
  CHECK_FALSE(check_h2(tie).ordering_ok);

  HMatrix mid(4);
  mid(0, 0) = Quaternion::complex(3.0, 1.0);
  mid(1, 1) = Quaternion::complex(1.0, 2.0);
  mid(2, 2) = Quaternion::complex(1.0, 3.0);
  mid(3, 3) = Quaternion::complex(-5.0, std::sqrt(3.0));
  const H2Report r = check_h2(mid);
  CHECK(r.ordering_ok);
  CHECK(r.all());

  HMatrix end_tie(4);
  end_tie(0, 0) = Quaternion::complex(3.0, 1.0);
  end_tie(1, 1) = Quaternion::complex(3.0, 2.0);
  end_tie(2, 2) = Quaternion::complex(1.0, 3.0);
  end_tie(3, 3) = Quaternion::complex(-7.0, std::sqrt(3.0));
  CHECK_FALSE(check_h2(end_tie).ordering_ok);
}

TEST_CASE("spectral ordering rejects vanishing end frequencies and rational ratios") {
  HMatrix b0(2);
  b0(0, 0) = Quaternion::complex(1.0, 0.0);
  b0(1, 1) = Quaternion::complex(-1.0, 1.0);
  CHECK_FALSE(check_h2(b0).b_ends_nonzero);

  HMatrix rat(2);
  rat(0, 0) = Quaternion::complex(1.0, 2.0);
  rat(1, 1) = Quaternion::complex(-1.0, 3.0);
  const H2Report r = check_h2(rat);
  CHECK(r.b_ends_nonzero);
  CHECK_FALSE(r.ratio_irrational_at_resolution);
  CHECK_FALSE(r.all());

  CHECK_THROWS_AS(check_h2(reference_A()), std::invalid_argument);
}

TEST_CASE("corner condition on the reference pair and its failures") {
  const H3Report ok = check_h3(reference_A());
  CHECK(ok.all());
  CHECK(ok.p == reference_A()(0, 1));
  CHECK(ok.q == reference_A()(1, 0));

  HMatrix bad = reference_A();
  bad(0, 1) = kOne + kI;
  const H3Report r = check_h3(bad);
  CHECK_FALSE(r.p_ok);
  CHECK(r.q_ok);
  CHECK_FALSE(r.all());

  HMatrix zero(2);
  CHECK_FALSE(check_h3(zero).all());
}

TEST_CASE("cartan diagonalization round trips constructed conjugates") {
  for (int t = 0; t < 25; ++t) {
    const int n = 2 + t % 3;
    auto eng = make_engine(52, t);
    std::uniform_real_distribution<double> gap(0.5, 1.5), imag(0.5, 2.0);
    HMatrix D(n);
    double a = 0.0, mean = 0.0;
    std::vector<double> reals(n);
    for (int r = 0; r < n; ++r) {
      reals[r] = a;
      a -= gap(eng);
      mean += reals[r] / n;
    }
    for (int r = 0; r < n; ++r) D(r, r) = Quaternion::complex(reals[r] - mean, imag(eng));

    const HMatrix h = random_group_element(n, derive_seed(53, t));
    const HMatrix B = h * D * inverse(h);
    const CartanFrame f = diagonalize_cartan(B);
    CHECK(f.residual < 1e-8);
    for (int r = 0; r < n; ++r) CHECK((f.B_diag(r, r) - D(r, r)).norm() < 1e-8);
    CHECK(std::abs(study_det_abs(f.g) - 1.0) < 1e-8);
    // conjugation by the frame really lands on the diagonal
    const HMatrix back = f.g * B * inverse(f.g);
    CHECK((back - f.B_diag).frobenius_norm() < 1e-7);
  }
}

TEST_CASE("cartan canonical form fixes diagonal input and sign conventions") {
  const CartanFrame f = diagonalize_cartan(reference_B());
  CHECK((f.B_diag - reference_B()).frobenius_norm() < 1e-12);
  CHECK(f.residual < 1e-12);

  // negative imaginary parts flip to the canonical nonnegative representative
  HMatrix Bneg(2);
  Bneg(0, 0) = Quaternion::complex(1.0, -1.0);
  Bneg(1, 1) = Quaternion::complex(-1.0, -std::sqrt(2.0));
  const CartanFrame g = diagonalize_cartan(Bneg);
  CHECK(g.B_diag(0, 0).x > 0.0);
  CHECK(g.B_diag(1, 1).x > 0.0);
  CHECK((g.B_diag - reference_B()).frobenius_norm() < 1e-10);
}

TEST_CASE("cartan rejects defective and near-degenerate input") {
  HMatrix nil(2);
  nil(0, 1) = kOne;
  CHECK_THROWS_AS(diagonalize_cartan(nil), CartanError);

  HMatrix iso(2);
  iso(0, 0) = kI;
  iso(1, 1) = kI;
  bool near_degenerate = false;
  try {
    diagonalize_cartan(iso);
  } catch (const CartanError& e) {
    near_degenerate = e.kind() == CartanError::Kind::NearDegenerate;
  }
  CHECK(near_degenerate);
}

TEST_CASE("verdicts on the reference pair and structured failures") {
  const Certificate c = certify(reference_A(), reference_B());
  CHECK(c.verdict == Verdict::Controllable);
  CHECK(c.h1.holds);
  CHECK(c.h1.rank == 15);
  CHECK(c.h2.all());
  CHECK(c.h3.all());
  CHECK(c.frame.has_value());
  CHECK(c.reason.empty());

  // commuting diagonals: rank condition fails, so not accessible
  HMatrix A(2), B(2);
  A(0, 0) = Quaternion::complex(0.0, 1.0);
  A(1, 1) = Quaternion::complex(0.0, -1.0);
  B(0, 0) = Quaternion::complex(1.0, 2.0);
  B(1, 1) = Quaternion::complex(-1.0, 3.0);
  const Certificate na = certify(A, B);
  CHECK(na.verdict == Verdict::NotAccessible);
  CHECK_FALSE(na.h1.holds);

  // full rank but rational frequency ratio: sufficient conditions silent
  HMatrix Brat(2);
  Brat(0, 0) = Quaternion::complex(1.0, 2.0);
  Brat(1, 1) = Quaternion::complex(-1.0, 3.0);
  const Certificate inc = certify(reference_A(), Brat);
  CHECK(inc.h1.holds);
  CHECK(inc.verdict == Verdict::Inconclusive);
  CHECK_FALSE(inc.reason.empty());

  // defective B degrades to inconclusive, never controllable
  HMatrix Bdef(2);
  Bdef(0, 1) = kOne;
  const Certificate def = certify(reference_A(), Bdef);
  CHECK(def.verdict != Verdict::Controllable);
}

TEST_CASE("verdict survives conjugation of the whole system") {
  const CertifyOptions opts;
  for (int t = 0; t < 10; ++t) {
    const HMatrix g = random_group_element(2, derive_seed(54, t));
    const auto [A2, B2] = conjugate_system(reference_A(), reference_B(), g);
    const Certificate c = certify(A2, B2, opts);
    CHECK(c.verdict == Verdict::Controllable);
  }
}

TEST_CASE("generic sampling is deterministic in the seed") {
  CertifyOptions opts;
  opts.seed = 7;
  const GenericStats s1 = sample_generic(2, 64, 7, opts, 10);
  const GenericStats s2 = sample_generic(2, 64, 7, opts, 10);
  CHECK(s1.h1_count == s2.h1_count);
  CHECK(s1.controllable_count == s2.controllable_count);
  CHECK(s1.h1_fraction == s2.h1_fraction);
  CHECK(s1.conjugation_verdicts_stable);
  CHECK(s1.trials == 64);
  CHECK(s1.n == 2);
}
