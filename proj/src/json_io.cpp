#include "slq/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slq {

Json to_json(const Quaternion& q) { return Json::array({q.w, q.x, q.y, q.z}); }

Quaternion quaternion_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("quaternion: expected [w, x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

Json to_json(const HMatrix& M) {
  Json rows = Json::array();
  for (int r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (int s = 0; s < M.cols(); ++s) row.push_back(to_json(M(r, s)));
    rows.push_back(std::move(row));
  }
  return Json{{"n", M.rows()}, {"entries", std::move(rows)}};
}

HMatrix hmatrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw std::invalid_argument("matrix: expected {\"n\": ..., \"entries\": ...}");
  const int n = j.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("matrix: n >= 1 required");
  const Json& rows = j.at("entries");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("matrix: row count does not match n");
  HMatrix M(n);
  for (int r = 0; r < n; ++r) {
    const Json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument("matrix: column count does not match n");
    for (int s = 0; s < n; ++s) M(r, s) = quaternion_from_json(row[s]);
  }
  return M;
}

Json to_json(const ControlSignal& sig) {
  Json segs = Json::array();
  for (const auto& s : sig.segments) segs.push_back(Json::array({s.duration, s.u}));
  return Json{{"segments", std::move(segs)}};
}

ControlSignal signal_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("segments"))
    throw std::invalid_argument("signal: expected {\"segments\": [[duration, u], ...]}");
  ControlSignal sig;
  for (const auto& seg : j.at("segments")) {
    if (!seg.is_array() || seg.size() != 2)
      throw std::invalid_argument("signal: each segment is [duration, u]");
    sig.segments.push_back({seg[0].get<double>(), seg[1].get<double>()});
  }
  validate_signal(sig);
  return sig;
}

Json to_json(const H1Report& r) {
  return Json{{"holds", r.holds}, {"rank", r.rank}, {"margin", r.margin}};
}

Json to_json(const H2Report& r) {
  return Json{{"is_diagonal_frame", r.is_diagonal_frame},
              {"a", r.a},
              {"b", r.b},
              {"ordering_ok", r.ordering_ok},
              {"b_ends_nonzero", r.b_ends_nonzero},
              {"ratio_irrational_at_resolution", r.ratio_irrational_at_resolution},
              {"resolution_Q", r.resolution_Q}};
}

Json to_json(const H3Report& r) {
  return Json{
      {"p", to_json(r.p)}, {"q", to_json(r.q)}, {"p_ok", r.p_ok}, {"q_ok", r.q_ok}};
}

Json to_json(const CartanFrame& f) {
  return Json{{"g", to_json(f.g)}, {"residual", f.residual}};
}

Json to_json(const Certificate& c) {
  Json j{{"verdict", to_string(c.verdict)},
         {"h1", to_json(c.h1)},
         {"h2", to_json(c.h2)},
         {"h3", to_json(c.h3)},
         {"frame", c.frame ? to_json(*c.frame) : Json(nullptr)},
         {"config",
          Json{{"Q", c.config.Q}, {"tol", c.config.tol}, {"seed", c.config.seed}}}};
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

Json to_json(const Subalgebra& S) {
  Json basis = Json::array();
  for (const auto& b : S.basis) basis.push_back(to_json(b));
  return Json{{"ambient_n", S.ambient_n},
              {"basis", std::move(basis)},
              {"span_rank", S.span_rank},
              {"closure_depth", S.closure_depth},
              {"margin", S.margin},
              {"stable", S.stable}};
}

Json to_json(const GenericStats& s) {
  return Json{{"n", s.n},
              {"trials", s.trials},
              {"seed", s.seed},
              {"h1_count", s.h1_count},
              {"controllable_count", s.controllable_count},
              {"h1_fraction", s.h1_fraction},
              {"controllable_fraction", s.controllable_fraction},
              {"conjugation_checks", s.conjugation_checks},
              {"conjugation_verdicts_stable", s.conjugation_verdicts_stable}};
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

std::string dump_json(const Json& j, bool compact) {
  return compact ? j.dump() : j.dump(2);
}

}  // namespace slq
