#pragma once

// Flat key=value configuration schema.
//
//   # comment
//   n_agents = 50
//   objective = sc_quadratic
//
// Unknown and duplicate keys are errors. See README.md for the key list.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rsgd/simulator.hpp"

namespace rsgd {

using ConfigEntries = std::map<std::string, std::string>;

/// Keys that must be present in every configuration.
const std::vector<std::string>& required_config_keys();

/// Optional keys with their default values ("" means unset).
const ConfigEntries& optional_config_defaults();

/// Syntax pass: comments, key=value shape, unknown and duplicate keys.
/// Errors name the offending line and key.
ConfigEntries parse_config_text(std::string_view text);

ConfigEntries read_config_file(const std::filesystem::path& path);

std::vector<std::string> preset_names();

/// Entries of a named preset ("sc-fig1", "pl-fig2", "audit-tiny", ...).
ConfigEntries preset_entries(const std::string& name);

/// Semantic pass: every missing required key is reported at once, values
/// are parsed, defaults filled, and SimulationConfig::validate() applied.
SimulationConfig config_from_entries(const ConfigEntries& entries);

/// Fully resolved entries for a config; doubles use shortest round-trip
/// formatting so config_from_entries(entries_from_config(c)) reproduces c.
ConfigEntries entries_from_config(const SimulationConfig& config);

SimulationConfig load_config(const std::filesystem::path& path);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace rsgd
