#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fairpark/model.hpp"
#include "fairpark/smartpark.hpp"

namespace fairpark {

// Instance JSON, documented in docs/formats.md.
nlohmann::json to_json(const Instance& instance);
// Parses and validates. Throws InstanceError on schema or invariant problems.
Instance instance_from_json(const nlohmann::json& doc);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

// Scenario JSON for the dynamic simulator. Parsing validates and throws
// ScenarioError.
nlohmann::json to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fairpark
