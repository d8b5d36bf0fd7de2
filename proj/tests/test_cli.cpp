#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "symket/scenario.hpp"

using namespace symket;

namespace {

const CheckResult* find_check(const ScenarioReport& report,
                              const std::string& name) {
  for (const auto& check : report.checks) {
    if (check.name == name) return &check;
  }
  return nullptr;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("config files parse key-value lines with comments", "[cli]") {
  std::istringstream in(
      "# run setup\n"
      "scenario = densities\n"
      "statistics fermion\n"
      "seed = 42   # trailing comment\n"
      "well = 0,1,1\n"
      "well = 0,1,2\n"
      "grid-points = 501\n"
      "\n"
      "format = csv\n");
  const auto options = parse_config_stream(in);
  REQUIRE(options.scenario == "densities");
  REQUIRE(options.statistics == "fermion");
  REQUIRE(options.seed == 42u);
  REQUIRE(options.wells.size() == 2);
  REQUIRE(options.wells[1] == "0,1,2");
  REQUIRE(options.grid_points == 501u);
  REQUIRE(options.format == "csv");
}

TEST_CASE("config files reject unknown keys and malformed lines", "[cli]") {
  std::istringstream unknown("speed = 9\n");
  REQUIRE_THROWS_AS(parse_config_stream(unknown), ConfigError);
  std::istringstream missing("scenario\n");
  REQUIRE_THROWS_AS(parse_config_stream(missing), ConfigError);
  std::istringstream bad_number("a = fast\n");
  REQUIRE_THROWS_AS(parse_config_stream(bad_number), ConfigError);
}

TEST_CASE("flags override config file values", "[cli]") {
  ScenarioOptions file;
  file.scenario = "no-cloning";
  file.a = 0.6;
  file.b = 0.8;
  file.seed = 1;
  ScenarioOptions flags;
  flags.seed = 9;
  const auto merged = merge_options(file, flags);
  REQUIRE(merged.scenario == "no-cloning");
  REQUIRE(merged.a == 0.6);
  REQUIRE(merged.seed == 9u);
}

TEST_CASE("seed resolution prefers explicit values over the environment",
          "[cli]") {
  ScenarioOptions options;
  options.scenario = "photon-pair";
  REQUIRE(resolve_config(options, nullptr).seed == 0u);
  REQUIRE(resolve_config(options, "17").seed == 17u);
  options.seed = 4;
  REQUIRE(resolve_config(options, "17").seed == 4u);
  options.seed.reset();
  REQUIRE_THROWS_AS(resolve_config(options, "not-a-number"), ConfigError);
}

TEST_CASE("amplitude validation accepts rounded values and renormalizes",
          "[cli]") {
  ScenarioOptions options;
  options.scenario = "no-cloning";
  options.a = 0.70710678;
  options.b = 0.70710678;
  const auto config = resolve_config(options, nullptr);
  REQUIRE(std::abs(config.a * config.a + config.b * config.b - 1.0) < 1e-14);

  options.b = 0.9;
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
  options.b.reset();
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
}

TEST_CASE("scenario and format combinations are validated", "[cli]") {
  ScenarioOptions options;
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
  options.scenario = "teleportation";
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
  options.scenario = "no-cloning";
  options.format = "csv";
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
  options.format = "json";
  REQUIRE(resolve_config(options, nullptr).format == ReportFormat::Json);
  options.statistics = "anyon";
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
}

TEST_CASE("density scenarios default their grid and wells", "[cli]") {
  ScenarioOptions options;
  options.scenario = "densities";
  const auto config = resolve_config(options, nullptr);
  REQUIRE(config.grid.points == 1001);
  REQUIRE(config.wells.size() == 2);
  REQUIRE(config.wells[1].n == 2);

  options.scenario = "disjoint-wells";
  const auto disjoint = resolve_config(options, nullptr);
  REQUIRE(disjoint.grid.x_max == 3.0);
  REQUIRE(disjoint.grid.points == 3001);
  REQUIRE(disjoint.wells[1].left == 2.0);

  options.wells = {"0,1,1"};
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
  options.wells = {"0,1,1", "2,5,1"};
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
  options.wells = {"0,1,1", "2,3,0"};
  REQUIRE_THROWS_AS(resolve_config(options, nullptr), ConfigError);
}

TEST_CASE("every scenario passes its own checks", "[cli]") {
  for (const char* name : {"no-cloning", "wrong-clone", "photon-pair",
                           "densities", "disjoint-wells"}) {
    ScenarioOptions options;
    options.scenario = name;
    const auto config = resolve_config(options, nullptr);
    const auto report = build_scenario_report(config);
    for (const auto& check : report.checks) {
      INFO(name << ": " << check.name << " error=" << check.error);
      REQUIRE(check.pass);
    }
  }
}

TEST_CASE("the no-cloning report carries the fidelity gap", "[cli]") {
  ScenarioOptions options;
  options.scenario = "no-cloning";
  options.a = 0.70710678;
  options.b = 0.70710678;
  const auto report = build_scenario_report(resolve_config(options, nullptr));
  const auto* check = find_check(report, "superposition-not-cloned");
  REQUIRE(check != nullptr);
  REQUIRE(check->pass);
  const auto* formula = find_check(report, "fidelity-formula");
  REQUIRE(formula != nullptr);
  REQUIRE(formula->error < 1e-10);
  const std::string text = report.report.dump();
  REQUIRE(text.find("\"fidelity\": 0.707106781") != std::string::npos);
}

TEST_CASE("reports serialize to identical bytes across runs", "[cli]") {
  for (const char* name : {"no-cloning", "photon-pair", "densities"}) {
    ScenarioOptions options;
    options.scenario = name;
    options.seed = 7;
    const auto config = resolve_config(options, nullptr);
    const auto first = build_scenario_report(config).report.dump();
    const auto second = build_scenario_report(config).report.dump();
    REQUIRE(first == second);
  }
}

TEST_CASE("run_scenario writes the report to the stream", "[cli]") {
  ScenarioOptions options;
  options.scenario = "wrong-clone";
  std::ostringstream out, err;
  const int code = run_scenario(resolve_config(options, nullptr), out, err);
  REQUIRE(code == 0);
  REQUIRE(out.str().find("\"scenario\": \"wrong-clone\"") != std::string::npos);
  REQUIRE(out.str().find("\"all_pass\": true") != std::string::npos);
  REQUIRE(err.str().empty());
}

TEST_CASE("run_scenario writes output files atomically", "[cli]") {
  const auto path = temp_path("symket_report_test.json");
  std::filesystem::remove(path);
  ScenarioOptions options;
  options.scenario = "no-cloning";
  options.output = path.string();
  std::ostringstream out, err;
  const int code = run_scenario(resolve_config(options, nullptr), out, err);
  REQUIRE(code == 0);
  REQUIRE(out.str().empty());
  REQUIRE(std::filesystem::exists(path));
  REQUIRE_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  REQUIRE(text.find("\"scenario\": \"no-cloning\"") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("csv output goes to the file with the report on the stream", "[cli]") {
  const auto path = temp_path("symket_density_test.csv");
  std::filesystem::remove(path);
  ScenarioOptions options;
  options.scenario = "densities";
  options.format = "csv";
  options.output = path.string();
  std::ostringstream out, err;
  const int code = run_scenario(resolve_config(options, nullptr), out, err);
  REQUIRE(code == 0);
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line.rfind("# x0=", 0) == 0);
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "x,rho");
  REQUIRE(out.str().find("\"scenario\": \"densities\"") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("impossible density configurations surface as config errors", "[cli]") {
  ScenarioOptions options;
  options.scenario = "densities";
  options.wells = {"0,1,1", "0,1,1"};  // identical wells: not orthogonal
  REQUIRE_THROWS_AS(build_scenario_report(resolve_config(options, nullptr)),
                    ConfigError);

  options.scenario = "disjoint-wells";
  options.wells = {"0,2,1", "1,3,1"};  // overlapping supports
  REQUIRE_THROWS_AS(build_scenario_report(resolve_config(options, nullptr)),
                    ConfigError);
}

TEST_CASE("photon-pair reports a seed-consistent collapse trace", "[cli]") {
  ScenarioOptions options;
  options.scenario = "photon-pair";
  options.seed = 7;
  const auto report = build_scenario_report(resolve_config(options, nullptr));
  const auto* trace_check = find_check(report, "seeded-trace-consistent");
  REQUIRE(trace_check != nullptr);
  REQUIRE(trace_check->pass);
  const std::string text = report.report.dump();
  REQUIRE(text.find("\"trace\"") != std::string::npos);
}
