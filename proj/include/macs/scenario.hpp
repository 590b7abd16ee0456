#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "macs/simulation.hpp"

namespace macs {

/// Parses a scenario document, validating the schema and cross-section
/// dimensional consistency. Violations raise SchemaError with the JSON
/// path of the offending field.
Scenario parse_scenario(const nlohmann::json& doc);

Scenario load_scenario_file(const std::string& path);

/// Canonical JSON form of a scenario (stable key order, used for hashing
/// and for round-tripping the built-ins).
nlohmann::json scenario_to_json(const Scenario& scenario);

/// FNV-1a over the canonical form; parse_scenario stores this in
/// content_hash, and callers that mutate a scenario can refresh it.
std::uint64_t scenario_content_hash(const Scenario& scenario);

/// Names of the embedded scenarios: paper-nominal, paper-robust, paper-drift.
const std::vector<std::string>& builtin_scenario_names();

bool is_builtin_scenario(const std::string& name);

/// JSON source of an embedded scenario.
const std::string& builtin_scenario_json(const std::string& name);

Scenario builtin_scenario(const std::string& name);

/// Loads a builtin by name or a scenario file by path.
Scenario open_scenario(const std::string& path_or_name);

}  // namespace macs
