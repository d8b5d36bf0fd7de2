// symket command line front end.
//
//   symket <scenario> [flags]
//   symket --scenario <name> [flags]
//   symket --config run.cfg [flags]
//
// Flags override config-file values; SYMKET_SEED supplies the seed when
// neither sets one. Exit codes: 0 all checks pass, 1 check failure,
// 2 invalid configuration.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symket/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Symmetrized two-particle state scenarios: cloning limits, photon "
      "pairs, and one-particle densities"};
  app.name("symket");

  symket::ScenarioOptions flags;
  std::string config_path;
  std::string scenario_flag, statistics_flag, format_flag, output_flag;
  double a_flag = 0.0, b_flag = 0.0, grid_min_flag = 0.0, grid_max_flag = 0.0;
  std::uint64_t seed_flag = 0, grid_points_flag = 0;
  std::vector<std::string> well_flags;

  auto* scenario_opt = app.add_option(
      "--scenario,scenario", scenario_flag,
      "Scenario name (no-cloning, wrong-clone, photon-pair, densities, "
      "disjoint-wells)");
  scenario_opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  auto* a_opt = app.add_option("--a", a_flag, "First superposition amplitude");
  auto* b_opt = app.add_option("--b", b_flag, "Second superposition amplitude");
  auto* statistics_opt = app.add_option("--statistics", statistics_flag,
                                        "Particle statistics: boson|fermion");
  auto* seed_opt = app.add_option("--seed", seed_flag,
                                  "Measurement seed (SYMKET_SEED as fallback)");
  auto* grid_min_opt =
      app.add_option("--grid-min", grid_min_flag, "Grid lower bound");
  auto* grid_max_opt =
      app.add_option("--grid-max", grid_max_flag, "Grid upper bound");
  auto* grid_points_opt =
      app.add_option("--grid-points", grid_points_flag, "Grid sample count");
  app.add_option("--well", well_flags,
                 "Well as left,right,n (repeat for the second well)");
  auto* output_opt =
      app.add_option("--output", output_flag, "Output file path");
  auto* format_opt = app.add_option("--format", format_flag,
                                    "Output format: json|csv (csv for "
                                    "density scenarios only)");
  app.add_option("--config", config_path,
                 "Flat key-value config file; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (scenario_opt->count() > 0) flags.scenario = scenario_flag;
    if (a_opt->count() > 0) flags.a = a_flag;
    if (b_opt->count() > 0) flags.b = b_flag;
    if (statistics_opt->count() > 0) flags.statistics = statistics_flag;
    if (seed_opt->count() > 0) flags.seed = seed_flag;
    if (grid_min_opt->count() > 0) flags.grid_min = grid_min_flag;
    if (grid_max_opt->count() > 0) flags.grid_max = grid_max_flag;
    if (grid_points_opt->count() > 0) flags.grid_points = grid_points_flag;
    flags.wells = well_flags;
    if (output_opt->count() > 0) flags.output = output_flag;
    if (format_opt->count() > 0) flags.format = format_flag;

    symket::ScenarioOptions options = flags;
    if (!config_path.empty()) {
      options = symket::merge_options(symket::load_config_file(config_path),
                                      flags);
    }
    const symket::ScenarioConfig config = symket::resolve_config(options);
    return symket::run_scenario(config, std::cout, std::cerr);
  } catch (const symket::ConfigError& e) {
    std::cerr << "symket: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "symket: internal error: " << e.what() << "\n";
    return 2;
  }
}
