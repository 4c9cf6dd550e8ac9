#include "slq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slq/flow.hpp"
#include "slq/rng.hpp"
#include "slq/wedge.hpp"

namespace slq {

HMatrix reference_A() {
  HMatrix A(2);
  A(0, 1) = kOne + kJ;
  A(1, 0) = kI + kK;
  return A;
}

HMatrix reference_B() {
  HMatrix B(2);
  B(0, 0) = Quaternion::complex(1.0, 1.0);
  B(1, 1) = Quaternion::complex(-1.0, std::sqrt(2.0));
  return B;
}

namespace {

class SuiteBuilder {
 public:
  explicit SuiteBuilder(std::string name) { report_.suite = std::move(name); }

  void add(const std::string& id, const std::string& op, const Json& inputs, double value,
           const std::string& threshold, bool pass) {
    CheckRecord rec;
    rec.id = id;
    rec.op = op;
    rec.inputs_hash = fnv1a64_hex(inputs.dump());
    rec.value = value;
    rec.threshold = threshold;
    rec.pass = pass;
    (pass ? report_.passed : report_.failed)++;
    report_.checks.push_back(std::move(rec));
  }

  SuiteReport finish() {
    report_.ok = report_.failed == 0;
    return std::move(report_);
  }

 private:
  SuiteReport report_;
};

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = a + (b - a) * i / (count - 1);
  return g;
}

SuiteReport suite_limits(const CertifyOptions& cfg) {
  SuiteBuilder sb("limits");
  const HMatrix A = reference_A();
  const HMatrix B = reference_B();
  const auto grid = linspace(0.0, 8.0, 81);
  const Json inputs{{"A", to_json(A)}, {"B", to_json(B)}, {"t_max", 8.0}, {"points", 81}};

  const DecayTrace tr = scaled_limit_trace(A, B, grid, cfg.tol);
  const double p_norm = A(0, 1).norm();
  double dev = 0.0;
  for (double t : tr.target_entry_norms) dev = std::max(dev, std::abs(t - p_norm));
  sb.add("limits.target_constant", "scaled_limit_trace", inputs, dev, "<= 1e-10",
         dev <= 1e-10);

  const double pred = predicted_off_rate(A, B);
  const double rel = std::abs(tr.fitted_rate - pred) / std::abs(pred);
  sb.add("limits.slope_matches_prediction", "scaled_limit_trace", inputs, rel,
         "|fit-pred|/|pred| <= 0.05", rel <= 0.05);

  double worst_rise = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i < tr.off_target_norms.size(); ++i)
    worst_rise = std::max(worst_rise, tr.off_target_norms[i] - tr.off_target_norms[i - 1]);
  sb.add("limits.monotone_decay", "scaled_limit_trace", inputs, worst_rise, "<= 1e-12",
         worst_rise <= 1e-12);

  HMatrix A_pure(2);
  A_pure(0, 1) = kOne + kJ;
  const DecayTrace tr_pure = scaled_limit_trace(A_pure, B, grid, cfg.tol);
  double off_max = 0.0;
  for (double o : tr_pure.off_target_norms) off_max = std::max(off_max, o);
  sb.add("limits.pure_target_stays", "scaled_limit_trace",
         Json{{"A", to_json(A_pure)}, {"B", to_json(B)}}, off_max, "<= 1e-14",
         off_max <= 1e-14);

  HMatrix A3(3), B3(3);
  A3(0, 2) = kOne + kJ;
  A3(2, 0) = kI + kK;
  A3(1, 0) = kOne + kI + kJ;
  A3(0, 1) = kJ + kK;
  B3(0, 0) = Quaternion::complex(2.0, 1.0);
  B3(1, 1) = Quaternion::complex(0.0, 3.0);
  B3(2, 2) = Quaternion::complex(-2.0, std::sqrt(5.0));
  const Json inputs3{{"A", to_json(A3)}, {"B", to_json(B3)}};
  const DecayTrace tr3 = scaled_limit_trace(A3, B3, linspace(0.0, 8.0, 81), cfg.tol);
  const double pred3 = predicted_off_rate(A3, B3);
  const double rel3 = std::abs(tr3.fitted_rate - pred3) / std::abs(pred3);
  sb.add("limits.slope_matches_prediction_n3", "scaled_limit_trace", inputs3, rel3,
         "|fit-pred|/|pred| <= 0.05", rel3 <= 0.05);

  return sb.finish();
}

SuiteReport suite_cone(const CertifyOptions& cfg) {
  SuiteBuilder sb("cone");
  const double c1 = 1.0, c2 = std::sqrt(2.0);
  const int samples = 400;

  const Quaternion q_mixed = kOne + kJ;
  const ConeResult full = torus_cone_full(q_mixed, c1, c2, samples);
  sb.add("cone.full_mixed", "torus_cone_full",
         Json{{"q", to_json(q_mixed)}, {"c1", c1}, {"c2", c2}, {"samples", samples}},
         full.margin, "full and margin >= 0.5", full.full && full.margin >= 0.5);

  const Quaternion q_1i = kOne + kI;
  const ConeResult flat1 = torus_cone_full(q_1i, c1, c2, samples);
  sb.add("cone.reject_1i", "torus_cone_full", Json{{"q", to_json(q_1i)}}, flat1.margin,
         "not full", !flat1.full);

  const ConeResult flat2 = torus_cone_full(kJ, c1, c2, samples);
  sb.add("cone.reject_jk", "torus_cone_full", Json{{"q", to_json(kJ)}}, flat2.margin,
         "not full", !flat2.full);

  int disagreements = 0;
  auto eng = make_engine(cfg.seed, 77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Quaternion q{gauss(eng), gauss(eng), gauss(eng), gauss(eng)};
    const bool expect_full = !in_forbidden_union(q, cfg.tol);
    if (torus_cone_full(q, c1, c2, samples).full != expect_full) ++disagreements;
  }
  sb.add("cone.equivalence_random", "torus_cone_full",
         Json{{"count", 500}, {"seed", cfg.seed}}, disagreements, "== 0",
         disagreements == 0);

  return sb.finish();
}

SuiteReport suite_orbits(const CertifyOptions&) {
  SuiteBuilder sb("orbits");
  for (int n = 2; n <= 4; ++n)
    for (int d = 1; d < n; ++d) {
      const OrbitTangentRank r = orbit_tangent_rank(n, d);
      const double s4 = r.singular_values.size() >= 4 ? r.singular_values[3] : 0.0;
      const double s5 = r.singular_values.size() >= 5 ? r.singular_values[4] : 0.0;
      const double gap = s5 > 0.0 ? s4 / s5 : std::numeric_limits<double>::infinity();
      sb.add("orbit.rank_n" + std::to_string(n) + "_d" + std::to_string(d),
             "orbit_tangent_rank", Json{{"n", n}, {"d", d}}, static_cast<double>(r.rank),
             "rank == 4 and s4/s5 > 1e6", r.rank == 4 && gap > 1e6);
    }
  const OrbitTangentRank full = orbit_tangent_rank(2, 1, true);
  sb.add("orbit.full_action_n2_d1", "orbit_tangent_rank",
         Json{{"n", 2}, {"d", 1}, {"full_algebra", true}}, static_cast<double>(full.rank),
         "rank == 4", full.rank == 4);
  return sb.finish();
}

SuiteReport suite_homotopy(const CertifyOptions&) {
  SuiteBuilder sb("homotopy");
  const int cases[][2] = {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}};
  for (const auto& c : cases) {
    const HomotopyCheck hc = verify_conjugation_homotopy(c[0], c[1]);
    const double worst = std::max(hc.ad_residual, hc.fixes_vd_residual);
    sb.add("homotopy.n" + std::to_string(c[0]) + "_d" + std::to_string(c[1]),
           "verify_conjugation_homotopy", Json{{"n", c[0]}, {"d", c[1]}}, worst,
           "< 1e-10", worst < 1e-10);
  }
  return sb.finish();
}

HMatrix random_canonical_diagonal(int n, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> gap(0.4, 1.4), imag(0.3, 2.5);
  std::vector<double> a(n);
  double acc = 0.0;
  for (int r = 0; r < n; ++r) {
    a[r] = acc;
    acc -= gap(eng);
  }
  double mean = 0.0;
  for (double v : a) mean += v / n;
  HMatrix D(n);
  for (int r = 0; r < n; ++r) D(r, r) = Quaternion::complex(a[r] - mean, imag(eng));
  return D;
}

SuiteReport suite_cartan(const CertifyOptions& cfg) {
  SuiteBuilder sb("cartan");

  double worst_spec = 0.0, worst_resid = 0.0;
  auto eng = make_engine(cfg.seed, 31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = trial % 2 == 0 ? 2 : 3;
    HMatrix D = random_canonical_diagonal(n, eng);
    const HMatrix h = random_group_element(n, derive_seed(cfg.seed, 400 + trial));
    const HMatrix B = h * D * inverse(h);
    const CartanFrame frame = diagonalize_cartan(B, cfg.tol);
    worst_resid = std::max(worst_resid, frame.residual);
    for (int r = 0; r < n; ++r) {
      const Quaternion diff = frame.B_diag(r, r) - D(r, r);
      worst_spec = std::max(worst_spec, diff.norm());
    }
  }
  sb.add("cartan.roundtrip_spectrum", "diagonalize_cartan",
         Json{{"trials", 100}, {"seed", cfg.seed}}, worst_spec, "<= 1e-8",
         worst_spec <= 1e-8);
  sb.add("cartan.roundtrip_residual", "diagonalize_cartan",
         Json{{"trials", 100}, {"seed", cfg.seed}}, worst_resid, "< 1e-8",
         worst_resid < 1e-8);

  const HMatrix Bref = reference_B();
  const CartanFrame ref_frame = diagonalize_cartan(Bref, cfg.tol);
  double ref_err = ref_frame.residual;
  for (int r = 0; r < 2; ++r) ref_err = std::max(ref_err, (ref_frame.B_diag(r, r) - Bref(r, r)).norm());
  sb.add("cartan.already_diagonal", "diagonalize_cartan", Json{{"B", to_json(Bref)}},
         ref_err, "< 1e-12", ref_err < 1e-12);

  bool defective_flagged = false;
  HMatrix nil(2);
  nil(0, 1) = kOne;
  try {
    diagonalize_cartan(nil, cfg.tol);
  } catch (const CartanError& e) {
    defective_flagged = e.kind() == CartanError::Kind::Defective;
  }
  sb.add("cartan.defective_rejected", "diagonalize_cartan", Json{{"B", to_json(nil)}},
         defective_flagged ? 1.0 : 0.0, "error raised", defective_flagged);

  bool degenerate_flagged = false;
  HMatrix iso(2);
  iso(0, 0) = kI;
  iso(1, 1) = kI;
  try {
    diagonalize_cartan(iso, cfg.tol);
  } catch (const CartanError& e) {
    degenerate_flagged = e.kind() == CartanError::Kind::NearDegenerate;
  }
  sb.add("cartan.degenerate_rejected", "diagonalize_cartan", Json{{"B", to_json(iso)}},
         degenerate_flagged ? 1.0 : 0.0, "error raised", degenerate_flagged);

  // Same spectrum written in two different diagonal orders must canonicalize
  // to identical H2 flags.
  HMatrix B_perm(2);
  B_perm(0, 0) = Bref(1, 1);
  B_perm(1, 1) = Bref(0, 0);
  const H2Report f1 = check_h2(diagonalize_cartan(Bref, cfg.tol).B_diag, cfg.Q, cfg.tol);
  const H2Report f2 = check_h2(diagonalize_cartan(B_perm, cfg.tol).B_diag, cfg.Q, cfg.tol);
  const bool same = f1.ordering_ok == f2.ordering_ok &&
                    f1.b_ends_nonzero == f2.b_ends_nonzero &&
                    f1.ratio_irrational_at_resolution == f2.ratio_irrational_at_resolution;
  sb.add("cartan.flags_order_invariant", "check_h2",
         Json{{"B", to_json(Bref)}, {"B_permuted", to_json(B_perm)}}, same ? 1.0 : 0.0,
         "flags identical", same);

  return sb.finish();
}

SuiteReport suite_generic(const CertifyOptions& cfg) {
  SuiteBuilder sb("generic");
  const GenericStats stats = sample_generic(2, 1000, cfg.seed, cfg, 100);
  const Json inputs{{"n", 2}, {"trials", 1000}, {"seed", cfg.seed}};
  sb.add("generic.h1_fraction", "sample_generic", inputs, stats.h1_fraction, ">= 0.999",
         stats.h1_fraction >= 0.999);
  // The exact density of Controllable among Gaussian pairs is not a testable
  // constant at finite resolution Q; the fraction is reported, not gated.
  sb.add("generic.controllable_fraction", "sample_generic", inputs,
         stats.controllable_fraction, "reported", true);
  sb.add("generic.conjugation_stability", "sample_generic", inputs,
         static_cast<double>(stats.conjugation_checks),
         "all conjugated verdicts identical", stats.conjugation_verdicts_stable);
  return sb.finish();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"limits",   "cone",    "orbits",
                                                 "homotopy", "cartan",  "generic"};
  return names;
}

SuiteReport run_suite(const std::string& name, const CertifyOptions& cfg) {
  if (name == "limits") return suite_limits(cfg);
  if (name == "cone") return suite_cone(cfg);
  if (name == "orbits") return suite_orbits(cfg);
  if (name == "homotopy") return suite_homotopy(cfg);
  if (name == "cartan") return suite_cartan(cfg);
  if (name == "generic") return suite_generic(cfg);
  if (name == "all") {
    SuiteReport all;
    all.suite = "all";
    for (const auto& sub : suite_names()) {
      SuiteReport r = run_suite(sub, cfg);
      all.passed += r.passed;
      all.failed += r.failed;
      for (auto& c : r.checks) all.checks.push_back(std::move(c));
    }
    all.ok = all.failed == 0;
    return all;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

Json to_json(const SuiteReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"id", c.id},
                          {"op", c.op},
                          {"inputs_hash", c.inputs_hash},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"pass", c.pass}});
  return Json{{"suite", r.suite},
              {"checks", std::move(checks)},
              {"passed", r.passed},
              {"failed", r.failed},
              {"ok", r.ok}};
}

}  // namespace slq
