#pragma once

/**
 * @file record_io.hpp
 * @brief JSON form of solution records, shared by every CLI command.
 *
 *   {"schema_version": 1, "command": ..., "params": {k, a_size, A, alpha, theta},
 *    "results": [{h, residual, solver_tol, flags: {ti, i1, i2, i3, tol}, source, params}],
 *    "diagnostics": {...}}
 *
 * Each result repeats its parameters so a single record can be re-verified alone.
 */

#include <string>
#include <vector>

#include <json.hpp>

#include "wpgibbs/ising_field.hpp"

namespace wpgibbs {

inline constexpr int schema_version = 1;

nlohmann::json to_json(const model_params& params);
model_params params_from_json(const nlohmann::json& j);
/// The explicit A if present, else {1..a_size}.
subgroup_spec subgroup_from_json(const nlohmann::json& params_json);

nlohmann::json to_json(const solution_record& r);
solution_record record_from_json(const nlohmann::json& j);

nlohmann::json make_document(const std::string& command, const nlohmann::json& params,
                             const std::vector<solution_record>& records, const nlohmann::json& diagnostics);
std::vector<solution_record> records_from_document(const nlohmann::json& doc);

}  // namespace wpgibbs
