#ifndef SLQ_JSON_IO_HPP
#define SLQ_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "slq/certify.hpp"
#include "slq/flow.hpp"
#include "slq/hmatrix.hpp"
#include "slq/lie.hpp"
#include "slq/quaternion.hpp"

namespace slq {

/// Ordered JSON keeps report bytes stable across runs.
using Json = nlohmann::ordered_json;

Json to_json(const Quaternion& q);
Quaternion quaternion_from_json(const Json& j);

Json to_json(const HMatrix& M);
HMatrix hmatrix_from_json(const Json& j);

Json to_json(const ControlSignal& sig);
ControlSignal signal_from_json(const Json& j);

Json to_json(const H1Report& r);
Json to_json(const H2Report& r);
Json to_json(const H3Report& r);
Json to_json(const CartanFrame& f);
Json to_json(const Certificate& c);
Json to_json(const Subalgebra& S);
Json to_json(const GenericStats& s);

/// FNV-1a 64-bit hash as 16 hex digits; used to fingerprint report inputs.
std::string fnv1a64_hex(const std::string& bytes);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump_json(const Json& j, bool compact);

}  // namespace slq

#endif
