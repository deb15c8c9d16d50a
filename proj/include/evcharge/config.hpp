#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "evcharge/simulation.hpp"

namespace evcharge {

/// Parses the line-oriented `key = value` scenario format (grammar in
/// docs/config_format.md). Unknown sections or keys raise ParseError; the
/// assembled scenario is checked with validate() and may raise
/// ValidationError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Writes a config that parse_config reads back to an equal ScenarioConfig.
std::string write_config(const ScenarioConfig& config);

}  // namespace evcharge
