#include "wpgibbs/record_io.hpp"

#include <stdexcept>

namespace wpgibbs {

using nlohmann::json;

json to_json(const model_params& params) {
  std::vector<int> a;
  for (int i = 1; i <= params.a_size(); ++i) a.push_back(i);
  json j = {{"k", params.k()}, {"a_size", params.a_size()}, {"A", a}, {"alpha", params.alpha()},
            {"theta", params.theta()}};
  if (params.j() && params.beta()) {
    j["J"] = *params.j();
    j["beta"] = *params.beta();
  }
  return j;
}

model_params params_from_json(const json& j) {
  const int k = j.at("k").get<int>();
  const int a_size = j.contains("a_size") ? j.at("a_size").get<int>()
                                          : static_cast<int>(j.at("A").size());
  if (j.contains("J") && j.contains("beta")) {
    return model_params::from_coupling(k, a_size, j.at("J").get<double>(), j.at("beta").get<double>());
  }
  if (j.contains("alpha")) return model_params::from_alpha(k, a_size, j.at("alpha").get<double>());
  if (j.contains("theta")) return model_params::from_theta(k, a_size, j.at("theta").get<double>());
  throw std::invalid_argument("params need alpha or theta");
}

subgroup_spec subgroup_from_json(const json& params_json) {
  const int k = params_json.at("k").get<int>();
  if (params_json.contains("A")) return subgroup_spec(k, params_json.at("A").get<std::vector<int>>());
  return subgroup_spec::first_generators(k, params_json.at("a_size").get<int>());
}

json to_json(const solution_record& r) {
  return {{"h", {r.h[0], r.h[1], r.h[2], r.h[3]}},
          {"residual", r.residual},
          {"solver_tol", r.solver_tol},
          {"flags",
           {{"ti", r.flags.translation_invariant},
            {"i1", r.flags.in_i1},
            {"i2", r.flags.in_i2},
            {"i3", r.flags.in_i3},
            {"tol", r.flags.tol}}},
          {"source", std::string(to_string(r.source))},
          {"params", to_json(r.params)}};
}

solution_record record_from_json(const json& j) {
  const auto params = params_from_json(j.at("params"));
  const auto hv = j.at("h").get<std::vector<double>>();
  if (hv.size() != 4) throw std::invalid_argument("a record needs exactly four field values");
  const field_quad h{hv[0], hv[1], hv[2], hv[3]};
  const double tol = j.value("solver_tol", 1e-9);
  const double ctol = j.contains("flags") ? j.at("flags").value("tol", default_classify_tol) : default_classify_tol;
  const auto source = j.contains("source") ? solution_source_from_string(j.at("source").get<std::string>())
                                           : solution_source::full_solve;
  // Residual and flags are recomputed: a file is never trusted for them.
  return make_record(params, h, tol, source, ctol);
}

json make_document(const std::string& command, const json& params, const std::vector<solution_record>& records,
                   const json& diagnostics) {
  json results = json::array();
  for (const auto& r : records) results.push_back(to_json(r));
  return {{"schema_version", schema_version},
          {"command", command},
          {"params", params},
          {"results", results},
          {"diagnostics", diagnostics}};
}

std::vector<solution_record> records_from_document(const json& doc) {
  if (doc.value("schema_version", 0) != schema_version) {
    throw std::invalid_argument("unsupported schema_version (expected " + std::to_string(schema_version) + ")");
  }
  std::vector<solution_record> out;
  for (const auto& r : doc.at("results")) {
    json rec = r;
    if (!rec.contains("params")) rec["params"] = doc.at("params");
    out.push_back(record_from_json(rec));
  }
  return out;
}

}  // namespace wpgibbs
