#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "evcharge/config.hpp"
#include "evcharge/report.hpp"

namespace {

int finish(const evcharge::RunManifest& m) {
  std::cout << "wrote " << m.files.size() << " files to " << m.out_dir << '\n';
  return m.checks_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online EV charging simulator with regret accounting"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "simulate a scenario and check the regret bounds");
  run->add_option("--config", config_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed, "override the scenario seed");

  std::string which;
  auto* oracle = app.add_subcommand("oracle", "write a hindsight comparator");
  oracle->add_option("--config", config_path, "scenario file")->required();
  oracle->add_option("--which", which, "x_star, x_i_star, perday or relaxed")
      ->required()
      ->check(CLI::IsMember({"x_star", "x_i_star", "perday", "relaxed"}));
  oracle->add_option("--out", out_dir, "output directory")->required();

  std::string preset;
  std::string preset_dir = EVCHARGE_PRESET_DIR;
  auto* figures = app.add_subcommand("figures", "run a figure preset");
  figures->add_option("--preset", preset, "fig1_2, fig3_4_5, fig6 or fig7")->required();
  figures->add_option("--out", out_dir, "output directory")->required();
  figures->add_option("--presets", preset_dir, "directory holding the preset configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      evcharge::ScenarioConfig cfg = evcharge::load_config(config_path);
      if (seed) cfg.seed = *seed;
      return finish(evcharge::run_command(cfg, config_path, out_dir, std::cout));
    }
    if (*oracle) {
      const evcharge::ScenarioConfig cfg = evcharge::load_config(config_path);
      return finish(evcharge::oracle_command(cfg, config_path, which, out_dir));
    }
    return finish(evcharge::figures_command(preset, preset_dir, out_dir, std::cout));
  } catch (const evcharge::ParseError& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
