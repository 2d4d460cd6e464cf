#pragma once

#include "json.hpp"
#include "pdp/problems/builtin.hpp"
#include "pdp/problems/dsm.hpp"

namespace pdp {

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);

// Matrices are stored row-major as {"rows": r, "cols": c, "data": [...]}.
nlohmann::json mat_to_json(const Mat& m);
Mat mat_from_json(const nlohmann::json& j);

nlohmann::json builtin_to_json(const BuiltinProblem& p);
BuiltinProblem builtin_from_json(const nlohmann::json& j);

nlohmann::json dsm_to_json(const DsmInstance& inst);
DsmInstance dsm_from_json(const nlohmann::json& j);

// Instance files are tagged unions: {"kind": "builtin"|"dsm", ...}. The
// optional meta object travels along untouched (generator provenance such as
// planted points).
struct InstanceFile {
  std::string kind;
  BuiltinProblem builtin;  // valid when kind == "builtin"
  DsmInstance dsm;         // valid when kind == "dsm"
  nlohmann::json meta;
};

void save_instance(const std::string& path, const InstanceFile& inst);
InstanceFile load_instance(const std::string& path);

}  // namespace pdp
