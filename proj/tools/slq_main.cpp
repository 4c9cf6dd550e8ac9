#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slq/certify.hpp"
#include "slq/flow.hpp"
#include "slq/json_io.hpp"
#include "slq/lie.hpp"
#include "slq/verify.hpp"

namespace {

using slq::Json;

struct GlobalOpts {
  double tol = 1e-9;
  int Q = 10000;
  std::uint64_t seed = 0;
  int max_depth = 0;
  std::string out;
  bool compact = false;

  slq::CertifyOptions certify() const {
    slq::CertifyOptions o;
    o.tol = tol;
    o.Q = Q;
    o.max_depth = max_depth;
    o.seed = seed;
    return o;
  }
};

void emit(const Json& j, const GlobalOpts& g) {
  const std::string text = slq::dump_json(j, g.compact) + "\n";
  if (g.out.empty())
    std::cout << text;
  else
    slq::write_text_file(g.out, text);
}

slq::HMatrix matrix_field(const Json& in, const char* key) {
  if (!in.contains(key))
    throw std::invalid_argument(std::string("input is missing \"") + key + "\"");
  return slq::hmatrix_from_json(in.at(key));
}

int cmd_certify(const std::string& input_path, const GlobalOpts& g) {
  const Json in = slq::load_json_file(input_path);
  const slq::HMatrix A = matrix_field(in, "A");
  const slq::HMatrix B = matrix_field(in, "B");
  if (A.n() != B.n()) throw std::invalid_argument("A and B must share a size");
  const slq::Certificate cert = slq::certify(A, B, g.certify());
  emit(slq::to_json(cert), g);
  switch (cert.verdict) {
    case slq::Verdict::Controllable: return 0;
    case slq::Verdict::NotAccessible: return 2;
    case slq::Verdict::Inconclusive: return 3;
  }
  return 3;
}

int cmd_verify(const std::string& suite, const GlobalOpts& g) {
  const slq::SuiteReport report = slq::run_suite(suite, g.certify());
  emit(slq::to_json(report), g);
  return report.ok ? 0 : 4;
}

int cmd_simulate(const std::string& input_path, const std::string& signal_path,
                 const std::string& trajectory_path, const GlobalOpts& g) {
  const Json in = slq::load_json_file(input_path);
  const slq::HMatrix A = matrix_field(in, "A");
  const slq::HMatrix B = matrix_field(in, "B");
  slq::HMatrix g0 = slq::HMatrix::identity(A.n());
  if (in.contains("g0")) g0 = slq::hmatrix_from_json(in.at("g0"));
  if (A.n() != B.n() || A.n() != g0.n())
    throw std::invalid_argument("A, B, g0 must share a size");
  const slq::ControlSignal sig = slq::signal_from_json(slq::load_json_file(signal_path));

  slq::FlowTrace trace;
  const slq::HMatrix gT = slq::flow(A, B, sig, g0, &trace);

  if (!trajectory_path.empty()) {
    std::string lines;
    for (std::size_t k = 0; k < trace.states.size(); ++k) {
      Json row{{"segment", k + 1}, {"g", slq::to_json(trace.states[k])}};
      lines += row.dump();
      lines += "\n";
    }
    slq::write_text_file(trajectory_path, lines);
  }

  emit(Json{{"g_final", slq::to_json(gT)},
            {"segments", sig.segments.size()},
            {"total_duration", sig.total_duration()},
            {"max_det_drift", trace.max_det_drift}},
       g);
  return 0;
}

int cmd_reach(const std::string& input_path, int budget, const GlobalOpts& g) {
  const Json in = slq::load_json_file(input_path);
  const slq::HMatrix A = matrix_field(in, "A");
  const slq::HMatrix B = matrix_field(in, "B");
  const slq::HMatrix target = matrix_field(in, "target");
  const slq::ReachResult r = slq::reach_probe(A, B, target, budget, g.seed);
  emit(Json{{"best_dist", r.best_dist},
            {"evaluations", r.evaluations},
            {"best_signal", slq::to_json(r.best_signal)}},
       g);
  return 0;
}

int cmd_diag(const std::string& input_path, const GlobalOpts& g) {
  const Json in = slq::load_json_file(input_path);
  const slq::HMatrix B = in.contains("B") ? matrix_field(in, "B") : slq::hmatrix_from_json(in);
  const slq::CartanFrame frame = slq::diagonalize_cartan(B, g.tol);
  const slq::H2Report h2 = slq::check_h2(frame.B_diag, g.Q, g.tol);
  emit(Json{{"frame", slq::to_json(frame)},
            {"B_diag", slq::to_json(frame.B_diag)},
            {"h2", slq::to_json(h2)}},
       g);
  return 0;
}

int cmd_sample(int n, int trials, const GlobalOpts& g) {
  const slq::GenericStats stats = slq::sample_generic(n, trials, g.seed, g.certify());
  emit(slq::to_json(stats), g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certification and simulation tools for bilinear systems on Sl(n,H)"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--tol", g.tol, "numeric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--Q", g.Q, "resolution of the rational-approximation search")
      ->check(CLI::Range(2, 100000000));
  app.add_option("--seed", g.seed, "root seed for all randomized operations");
  app.add_option("--max-depth", g.max_depth, "bracket-closure depth cap (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "write the report to this path instead of stdout");
  app.add_flag("--json", g.compact, "compact single-line JSON output");

  std::string input_path, signal_path, trajectory_path, suite;
  int budget = 1000, n = 2, trials = 100;

  auto* certify = app.add_subcommand("certify", "certify a pair {A, B} from JSON");
  certify->add_option("input", input_path, "JSON file with A and B")->required();

  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("--suite", suite, "limits|cone|orbits|homotopy|cartan|generic|all")
      ->required();

  auto* simulate = app.add_subcommand("simulate", "integrate a piecewise-constant control");
  simulate->add_option("input", input_path, "JSON file with A, B and optional g0")->required();
  simulate->add_option("--signal", signal_path, "JSON control signal")->required();
  simulate->add_option("--trajectory", trajectory_path, "write per-segment states as JSONL");

  auto* reach = app.add_subcommand("reach", "randomized reachability probe toward a target");
  reach->add_option("input", input_path, "JSON file with A, B and target")->required();
  reach->add_option("--budget", budget, "number of candidate signals")
      ->check(CLI::PositiveNumber);

  auto* diag = app.add_subcommand("diag", "canonical diagonal frame of B");
  diag->add_option("input", input_path, "JSON file with B (or a bare matrix)")->required();

  auto* sample = app.add_subcommand("sample", "certify random Gaussian pairs");
  sample->add_option("--n", n, "matrix size")->check(CLI::Range(2, 16));
  sample->add_option("--trials", trials, "number of pairs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return cmd_certify(input_path, g);
    if (verify->parsed()) return cmd_verify(suite, g);
    if (simulate->parsed()) return cmd_simulate(input_path, signal_path, trajectory_path, g);
    if (reach->parsed()) return cmd_reach(input_path, budget, g);
    if (diag->parsed()) return cmd_diag(input_path, g);
    if (sample->parsed()) return cmd_sample(n, trials, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
