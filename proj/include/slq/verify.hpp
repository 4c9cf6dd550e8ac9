#ifndef SLQ_VERIFY_HPP
#define SLQ_VERIFY_HPP

#include <string>
#include <vector>

#include "slq/certify.hpp"
#include "slq/json_io.hpp"

namespace slq {

/// Reference controllable pair on H²: A with mixed corner entries 1+j and
/// i+k, B diagonal with spectrum {1+i, -1+i√2}.
HMatrix reference_A();
HMatrix reference_B();

struct CheckRecord {
  std::string id;
  std::string op;
  std::string inputs_hash;
  double value = 0.0;
  std::string threshold;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;
  int passed = 0;
  int failed = 0;
  bool ok = false;
};

const std::vector<std::string>& suite_names();

/// Run one named verification suite ("all" concatenates every suite).
/// Throws std::invalid_argument on an unknown name.
SuiteReport run_suite(const std::string& name, const CertifyOptions& cfg);

Json to_json(const SuiteReport& r);

}  // namespace slq

#endif
