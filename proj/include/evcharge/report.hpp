#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "evcharge/regret.hpp"

namespace evcharge {

struct Evaluation {
  SimulationTrace trace;
  Comparators comparators;
  RegretReport report;
};

Evaluation evaluate(const ScenarioConfig& config);

struct OutputFile {
  std::string name;
  std::string digest;  // FNV-1a 64, hex
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::vector<OutputFile> files;
  double wall_seconds = 0.0;
  bool checks_passed = true;
};

std::string fnv1a64_hex(std::string_view bytes);

/// Numbers formatted with 12 significant digits.
std::string format_number(double v);

/// Writes regret.csv, load_profiles.csv, trace.csv and manifest.json, and one
/// PASS/FAIL line per bound check to `log`.
RunManifest run_command(const ScenarioConfig& config,
                        const std::string& config_path,
                        const std::filesystem::path& out_dir, std::ostream& log);

/// which: x_star, x_i_star, perday or relaxed.
RunManifest oracle_command(const ScenarioConfig& config,
                           const std::string& config_path,
                           const std::string& which,
                           const std::filesystem::path& out_dir);

/// Figure presets: fig1_2, fig3_4_5, fig6, fig7.
std::vector<std::string> figure_presets();
std::vector<std::string> preset_configs(const std::string& preset);

RunManifest figures_command(const std::string& preset,
                            const std::filesystem::path& preset_dir,
                            const std::filesystem::path& out_dir,
                            std::ostream& log);

}  // namespace evcharge
