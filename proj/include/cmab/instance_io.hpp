#pragma once

#include <filesystem>

#include <json.hpp>

#include "cmab/environment.hpp"

namespace cmab {

// Instance document, schema_version 1:
//
//   {
//     "schema_version": 1,
//     "name": "pmc-small",
//     "family": "pmc" | "logistic" | "linear",
//     "C": 1.0,                          (logistic only, default 1)
//     "L": 8, "K": 2, "M": 3,
//     "weights": [w_1, ..., w_M],
//     "params": [p_11, ..., p_1L, p_21, ...],   (row-major M x L)
//     "action_set": "budget" | [[1, 2], [1, 3], ...],   (1-based arm ids)
//     "correlation": "independent" | "shared-per-arm"
//   }
inline constexpr int kInstanceSchemaVersion = 1;

// Throws ConfigError on malformed documents and DomainError on invalid values.
ProblemInstance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const ProblemInstance& instance);

ProblemInstance load_instance(const std::filesystem::path& path);

} // namespace cmab
