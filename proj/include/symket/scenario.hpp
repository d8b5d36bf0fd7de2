// scenario.hpp
// Named, reproducible experiment runner. Each scenario builds states from
// the resolved configuration, evaluates a fixed list of invariant checks,
// and emits a deterministic JSON report (and optionally a CSV density
// table). Exit codes: 0 all checks pass, 1 a check failed, 2 invalid
// configuration.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symket/cloning.hpp"
#include "symket/density.hpp"
#include "symket/entanglement.hpp"
#include "symket/hilbert.hpp"
#include "symket/report.hpp"

namespace symket {

enum class ScenarioKind {
  NoCloning,
  WrongClone,
  PhotonPair,
  Densities,
  DisjointWells,
};

inline const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::NoCloning: return "no-cloning";
    case ScenarioKind::WrongClone: return "wrong-clone";
    case ScenarioKind::PhotonPair: return "photon-pair";
    case ScenarioKind::Densities: return "densities";
    case ScenarioKind::DisjointWells: return "disjoint-wells";
  }
  return "unknown";
}

enum class ReportFormat { Json, Csv };

inline const char* to_string(ReportFormat format) {
  return format == ReportFormat::Json ? "json" : "csv";
}

// Infinite well [left, right] holding the eigenstate with quantum number n.
struct WellSpec {
  double left = 0.0;
  double right = 1.0;
  unsigned n = 1;
};

// Configuration problems; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::NoCloning;
  ParticleStatistics statistics = ParticleStatistics::Boson;
  double a = 1.0 / std::numbers::sqrt2;
  double b = 1.0 / std::numbers::sqrt2;
  GridSpec grid;
  std::vector<WellSpec> wells;
  std::uint64_t seed = 0;
  std::string output;  // empty: write to standard output
  ReportFormat format = ReportFormat::Json;
};

// Raw option values as they arrive from flags or a config file; unset
// fields fall through to the next precedence level (flags > file > env
// SYMKET_SEED for the seed > defaults).
struct ScenarioOptions {
  std::optional<std::string> scenario;
  std::optional<std::string> statistics;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::optional<std::uint64_t> grid_points;
  std::vector<std::string> wells;  // raw "left,right,n" entries
  std::optional<std::string> output;
  std::optional<std::string> format;
};

namespace detail {

inline std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + what + ": \"" + text + "\"");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw ConfigError("invalid number for " + what + ": \"" + text + "\"");
  }
  return value;
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + what + ": \"" + text + "\"");
  }
  if (used != text.size() || text.find('-') != std::string::npos) {
    throw ConfigError("invalid integer for " + what + ": \"" + text + "\"");
  }
  return value;
}

}  // namespace detail

inline ScenarioKind parse_scenario(const std::string& name) {
  if (name == "no-cloning") return ScenarioKind::NoCloning;
  if (name == "wrong-clone") return ScenarioKind::WrongClone;
  if (name == "photon-pair") return ScenarioKind::PhotonPair;
  if (name == "densities") return ScenarioKind::Densities;
  if (name == "disjoint-wells") return ScenarioKind::DisjointWells;
  throw ConfigError("unknown scenario \"" + name +
                    "\" (expected no-cloning, wrong-clone, photon-pair, "
                    "densities, or disjoint-wells)");
}

inline ParticleStatistics parse_statistics(const std::string& name) {
  if (name == "boson") return ParticleStatistics::Boson;
  if (name == "fermion") return ParticleStatistics::Fermion;
  throw ConfigError("unknown statistics \"" + name +
                    "\" (expected boson or fermion)");
}

inline ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown format \"" + name + "\" (expected json or csv)");
}

inline WellSpec parse_well(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  if (parts.size() != 3) {
    throw ConfigError("well must be \"left,right,n\": \"" + text + "\"");
  }
  WellSpec well;
  well.left = detail::parse_double(detail::trim(parts[0]), "well left edge");
  well.right = detail::parse_double(detail::trim(parts[1]), "well right edge");
  const std::uint64_t n = detail::parse_u64(detail::trim(parts[2]), "well quantum number");
  if (n == 0 || n > 1u << 20) {
    throw ConfigError("well quantum number out of range: \"" + text + "\"");
  }
  well.n = static_cast<unsigned>(n);
  if (!(well.right - well.left > 1e-12)) {
    throw ConfigError("well interval is degenerate: \"" + text + "\"");
  }
  return well;
}

// Flat key-value config file. One `key value` or `key = value` pair per
// line, `#` starts a comment, keys are the flag names without the leading
// dashes; `well` may repeat.
inline ScenarioOptions parse_config_stream(std::istream& in) {
  ScenarioOptions options;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::string key, value;
    const auto equals = line.find('=');
    if (equals != std::string::npos) {
      key = detail::trim(line.substr(0, equals));
      value = detail::trim(line.substr(equals + 1));
    } else {
      const auto space = line.find_first_of(" \t");
      if (space == std::string::npos) {
        throw ConfigError("config line " + std::to_string(line_number) +
                          " has no value: \"" + line + "\"");
      }
      key = detail::trim(line.substr(0, space));
      value = detail::trim(line.substr(space + 1));
    }
    if (key.empty() || value.empty()) {
      throw ConfigError("malformed config line " + std::to_string(line_number));
    }
    if (key == "scenario") {
      options.scenario = value;
    } else if (key == "statistics") {
      options.statistics = value;
    } else if (key == "a") {
      options.a = detail::parse_double(value, "a");
    } else if (key == "b") {
      options.b = detail::parse_double(value, "b");
    } else if (key == "seed") {
      options.seed = detail::parse_u64(value, "seed");
    } else if (key == "grid-min") {
      options.grid_min = detail::parse_double(value, "grid-min");
    } else if (key == "grid-max") {
      options.grid_max = detail::parse_double(value, "grid-max");
    } else if (key == "grid-points") {
      options.grid_points = detail::parse_u64(value, "grid-points");
    } else if (key == "well") {
      options.wells.push_back(value);
    } else if (key == "output") {
      options.output = value;
    } else if (key == "format") {
      options.format = value;
    } else {
      throw ConfigError("unknown config key \"" + key + "\" on line " +
                        std::to_string(line_number));
    }
  }
  return options;
}

inline ScenarioOptions load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  return parse_config_stream(in);
}

// Field-wise overlay: anything set in `flags` wins over `base`.
inline ScenarioOptions merge_options(const ScenarioOptions& base,
                                     const ScenarioOptions& flags) {
  ScenarioOptions merged = base;
  if (flags.scenario) merged.scenario = flags.scenario;
  if (flags.statistics) merged.statistics = flags.statistics;
  if (flags.a) merged.a = flags.a;
  if (flags.b) merged.b = flags.b;
  if (flags.seed) merged.seed = flags.seed;
  if (flags.grid_min) merged.grid_min = flags.grid_min;
  if (flags.grid_max) merged.grid_max = flags.grid_max;
  if (flags.grid_points) merged.grid_points = flags.grid_points;
  if (!flags.wells.empty()) merged.wells = flags.wells;
  if (flags.output) merged.output = flags.output;
  if (flags.format) merged.format = flags.format;
  return merged;
}

inline bool is_density_scenario(ScenarioKind kind) {
  return kind == ScenarioKind::Densities || kind == ScenarioKind::DisjointWells;
}

// Validates the merged options and fills scenario defaults. `env_seed` is
// the SYMKET_SEED fallback, consulted only when no explicit seed is given.
inline ScenarioConfig resolve_config(const ScenarioOptions& options,
                                     const char* env_seed) {
  if (!options.scenario) throw ConfigError("no scenario selected");
  ScenarioConfig config;
  config.scenario = parse_scenario(*options.scenario);
  if (options.statistics) {
    config.statistics = parse_statistics(*options.statistics);
  }
  if (options.seed) {
    config.seed = *options.seed;
  } else if (env_seed != nullptr) {
    config.seed = detail::parse_u64(env_seed, "SYMKET_SEED");
  }
  if (options.output) config.output = *options.output;
  if (options.format) config.format = parse_format(*options.format);
  if (config.format == ReportFormat::Csv && !is_density_scenario(config.scenario)) {
    throw ConfigError("format csv is only available for density scenarios");
  }

  if (options.a || options.b) {
    if (!(options.a && options.b)) {
      throw ConfigError("amplitudes a and b must be given together");
    }
    config.a = *options.a;
    config.b = *options.b;
    const double norm2 = config.a * config.a + config.b * config.b;
    if (std::abs(norm2 - 1.0) > 1e-6) {
      throw ConfigError("amplitudes must satisfy a^2 + b^2 = 1");
    }
    // Accept values rounded to a few digits; renormalize exactly.
    const double scale = std::sqrt(norm2);
    config.a /= scale;
    config.b /= scale;
  }

  if (is_density_scenario(config.scenario)) {
    const bool disjoint = config.scenario == ScenarioKind::DisjointWells;
    config.grid = disjoint ? GridSpec{0.0, 3.0, 3001} : GridSpec{0.0, 1.0, 1001};
    if (options.grid_min) config.grid.x_min = *options.grid_min;
    if (options.grid_max) config.grid.x_max = *options.grid_max;
    if (options.grid_points) {
      config.grid.points = static_cast<std::size_t>(*options.grid_points);
    }
    if (!(config.grid.x_max - config.grid.x_min > 1e-12)) {
      throw ConfigError("grid range is degenerate");
    }
    if (config.grid.points < 2 || config.grid.points > 50'000'000) {
      throw ConfigError("grid-points out of range");
    }
    if (options.wells.empty()) {
      config.wells = disjoint
                         ? std::vector<WellSpec>{{0.0, 1.0, 1}, {2.0, 3.0, 1}}
                         : std::vector<WellSpec>{{0.0, 1.0, 1}, {0.0, 1.0, 2}};
    } else {
      for (const auto& raw : options.wells) {
        config.wells.push_back(parse_well(raw));
      }
    }
    if (config.wells.size() != 2) {
      throw ConfigError("density scenarios need exactly two wells");
    }
    for (const auto& well : config.wells) {
      if (well.left < config.grid.x_min - 1e-12 ||
          well.right > config.grid.x_max + 1e-12) {
        throw ConfigError("well extends outside the grid range");
      }
    }
  }
  return config;
}

inline ScenarioConfig resolve_config(const ScenarioOptions& options) {
  return resolve_config(options, std::getenv("SYMKET_SEED"));
}

// One named invariant evaluated during a scenario run. `error` is the
// measured discrepancy the check compares against its tolerance; for
// must-differ checks it is the measured separation instead.
struct CheckResult {
  std::string name;
  bool pass = false;
  double error = 0.0;
};

struct ScenarioReport {
  std::vector<CheckResult> checks;
  JsonValue report = JsonValue::object();
  std::optional<DensityProfile> csv_profile;

  bool all_pass() const {
    for (const auto& check : checks) {
      if (!check.pass) return false;
    }
    return true;
  }
};

namespace detail {

inline JsonValue state_to_json(const NParticleState& state) {
  JsonValue list = JsonValue::array();
  const NParticleState fixed_phase = state.canonical();
  for (const auto& [tuple, amplitude] : fixed_phase.amplitudes()) {
    JsonValue entry = JsonValue::object();
    JsonValue labels = JsonValue::array();
    for (const auto& label : tuple) {
      labels.push_back(JsonValue::string(label.str()));
    }
    entry.set("labels", std::move(labels));
    entry.set("re", JsonValue::number(amplitude.real()));
    entry.set("im", JsonValue::number(amplitude.imag()));
    list.push_back(std::move(entry));
  }
  return list;
}

inline JsonValue profile_to_json(const DensityProfile& profile) {
  JsonValue value = JsonValue::object();
  value.set("x0", JsonValue::number(profile.x0));
  value.set("dx", JsonValue::number(profile.dx));
  JsonValue values = JsonValue::array();
  for (double rho : profile.values) values.push_back(JsonValue::number(rho));
  value.set("values", std::move(values));
  return value;
}

inline JsonValue checks_to_json(const std::vector<CheckResult>& checks) {
  JsonValue list = JsonValue::array();
  for (const auto& check : checks) {
    JsonValue entry = JsonValue::object();
    entry.set("name", JsonValue::string(check.name));
    entry.set("pass", JsonValue::boolean(check.pass));
    entry.set("error", JsonValue::number(check.error));
    list.push_back(std::move(entry));
  }
  return list;
}

inline void add_check(std::vector<CheckResult>& checks, std::string name,
                      double error, double tolerance) {
  checks.push_back({std::move(name), error < tolerance, error});
}

inline void add_check_flag(std::vector<CheckResult>& checks, std::string name,
                           bool pass, double error) {
  checks.push_back({std::move(name), pass, error});
}

inline double max_abs_difference(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return worst;
}

// Grid index range covered by a well; endpoints snap to the nearest node.
inline IndexRange well_index_range(const WellSpec& well, const GridSpec& grid,
                                   std::size_t points) {
  const double dx = (grid.x_max - grid.x_min) / static_cast<double>(points - 1);
  const double lo = (well.left - grid.x_min) / dx;
  const double hi = (well.right - grid.x_min) / dx;
  IndexRange range;
  range.begin = static_cast<std::size_t>(std::max(0.0, std::ceil(lo - 1e-9)));
  range.end = std::min(points, static_cast<std::size_t>(std::floor(hi + 1e-9)) + 1);
  return range;
}

inline ScenarioReport build_no_cloning(const ScenarioConfig& config) {
  const double a = config.a;
  const double b = config.b;
  const auto verdict = no_cloning_gap(a, b, "psi", "phi", config.statistics);
  const auto flipped =
      no_cloning_gap(a, b, "psi", "phi",
                     config.statistics == ParticleStatistics::Boson
                         ? ParticleStatistics::Fermion
                         : ParticleStatistics::Boson);
  const auto swapped = no_cloning_gap(b, a, "psi", "phi", config.statistics);

  const double expected_fidelity = std::abs(a * a * a + b * b * b);
  const bool expected_clone = std::min(std::abs(a), std::abs(b)) < 1e-9;

  ScenarioReport result;
  auto& checks = result.checks;
  add_check(checks, "ideal-normalized",
            std::abs(verdict.ideal_state.norm() - 1.0), 1e-12);
  add_check(checks, "linear-normalized",
            std::abs(verdict.linear_state.norm() - 1.0), 1e-12);
  add_check(checks, "fidelity-formula",
            std::abs(verdict.fidelity - expected_fidelity), 1e-10);
  add_check_flag(checks, "superposition-not-cloned",
                 verdict.is_clone == expected_clone,
                 std::abs(verdict.fidelity -
                          (expected_clone ? 1.0 : expected_fidelity)));
  add_check(checks, "statistics-independent",
            std::abs(verdict.fidelity - flipped.fidelity), 1e-12);
  add_check(checks, "amplitude-swap-symmetric",
            std::abs(verdict.fidelity - swapped.fidelity), 1e-12);

  const CloneMap map({"psi", "phi"}, config.statistics);
  const NParticleState input =
      Complex{a, 0.0} * map.actions()[0].input +
      Complex{b, 0.0} * map.actions()[1].input;

  auto& report = result.report;
  report.set("scenario", JsonValue::string(to_string(config.scenario)));
  JsonValue inputs = JsonValue::object();
  inputs.set("a", JsonValue::number(a));
  inputs.set("b", JsonValue::number(b));
  inputs.set("statistics", JsonValue::string(to_string(config.statistics)));
  inputs.set("seed", JsonValue::integer(static_cast<long long>(config.seed)));
  report.set("inputs", std::move(inputs));
  JsonValue states = JsonValue::object();
  states.set("input", state_to_json(input));
  states.set("linear", state_to_json(verdict.linear_state));
  states.set("ideal", state_to_json(verdict.ideal_state));
  report.set("states", std::move(states));
  JsonValue results = JsonValue::object();
  results.set("fidelity", JsonValue::number(verdict.fidelity));
  results.set("expected_fidelity", JsonValue::number(expected_fidelity));
  results.set("is_clone", JsonValue::boolean(verdict.is_clone));
  report.set("results", std::move(results));
  return result;
}

inline ScenarioReport build_wrong_clone(const ScenarioConfig& config) {
  const auto demo = wrong_clone_demo("phi", config.statistics);
  const auto flipped =
      wrong_clone_demo("phi", config.statistics == ParticleStatistics::Boson
                                  ? ParticleStatistics::Fermion
                                  : ParticleStatistics::Boson);

  ScenarioReport result;
  auto& checks = result.checks;
  add_check(checks, "wrong-normalized", std::abs(demo.wrong.norm() - 1.0),
            1e-12);
  add_check(checks, "ideal-normalized", std::abs(demo.ideal.norm() - 1.0),
            1e-12);
  add_check(checks, "fidelity-half", std::abs(demo.fidelity - 0.5), 1e-12);
  add_check_flag(checks, "not-a-clone", demo.fidelity < 1.0 - 1e-12,
                 std::abs(demo.fidelity - 0.5));
  add_check(checks, "statistics-independent",
            std::abs(demo.fidelity - flipped.fidelity), 1e-12);

  auto& report = result.report;
  report.set("scenario", JsonValue::string(to_string(config.scenario)));
  JsonValue inputs = JsonValue::object();
  inputs.set("statistics", JsonValue::string(to_string(config.statistics)));
  inputs.set("seed", JsonValue::integer(static_cast<long long>(config.seed)));
  report.set("inputs", std::move(inputs));
  JsonValue states = JsonValue::object();
  states.set("wrong", state_to_json(demo.wrong));
  states.set("ideal", state_to_json(demo.ideal));
  report.set("states", std::move(states));
  JsonValue results = JsonValue::object();
  results.set("fidelity", JsonValue::number(demo.fidelity));
  report.set("results", std::move(results));
  return result;
}

inline ScenarioReport build_photon_pair(const ScenarioConfig& config) {
  const std::vector<std::string> outcomes{"H", "V"};
  const auto naive = photon_pair_naive();
  const auto sym = photon_pair_symmetrized();

  ScenarioReport result;
  auto& checks = result.checks;
  add_check(checks, "naive-normalized", std::abs(naive.norm() - 1.0), 1e-12);
  add_check(checks, "symmetrized-normalized", std::abs(sym.norm() - 1.0),
            1e-12);
  add_check(checks, "symmetrized-exchange-eigenstate",
            distance(exchange(sym, 0, 1), sym), 1e-12);
  add_check_flag(checks, "naive-not-exchange-eigenstate",
                 distance(exchange(naive, 0, 1), naive) > 1e-6,
                 distance(exchange(naive, 0, 1), naive));

  const auto dist_sym = measurement_probabilities(sym, "1", outcomes);
  const auto dist_naive = measurement_probabilities(naive, "1", outcomes);
  double total = dist_sym.deficit;
  double half_error = 0.0;
  double agree_error = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    total += dist_sym.outcomes[i].probability;
    half_error = std::max(
        half_error, std::abs(dist_sym.outcomes[i].probability - 0.5));
    agree_error = std::max(agree_error,
                           std::abs(dist_sym.outcomes[i].probability -
                                    dist_naive.outcomes[i].probability));
  }
  add_check(checks, "born-complete",
            std::abs(total - dist_sym.deficit - 1.0) + dist_sym.deficit, 1e-12);
  add_check(checks, "first-measurement-half", half_error, 1e-12);
  add_check(checks, "naive-symmetrized-agree", agree_error, 1e-12);

  const auto& post_h = dist_sym.outcomes[0].post_state;
  const auto target =
      symmetrize(NParticleState::ket(BasisLabel{"H", "1"}),
                 NParticleState::ket(BasisLabel{"H", "2"}),
                 ParticleStatistics::Boson);
  add_check(checks, "collapse-canonical", distance(post_h, target), 1e-12);

  const auto dist_second = measurement_probabilities(post_h, "2", outcomes);
  add_check(checks, "second-measurement-certain",
            std::abs(dist_second.outcomes[0].probability - 1.0), 1e-12);

  std::mt19937_64 rng(config.seed);
  const auto first = measure(sym, "1", outcomes, rng);
  const auto second = measure(first.post_state, "2", outcomes, rng);
  add_check_flag(checks, "seeded-trace-consistent",
                 second.projector_label.second == first.projector_label.second,
                 std::abs(second.probability - 1.0));

  auto& report = result.report;
  report.set("scenario", JsonValue::string(to_string(config.scenario)));
  JsonValue inputs = JsonValue::object();
  inputs.set("statistics", JsonValue::string("boson"));
  inputs.set("seed", JsonValue::integer(static_cast<long long>(config.seed)));
  report.set("inputs", std::move(inputs));
  JsonValue states = JsonValue::object();
  states.set("naive", state_to_json(naive));
  states.set("symmetrized", state_to_json(sym));
  states.set("post_first", state_to_json(first.post_state));
  states.set("post_second", state_to_json(second.post_state));
  report.set("states", std::move(states));
  JsonValue results = JsonValue::object();
  JsonValue probabilities = JsonValue::object();
  for (const auto& entry : dist_sym.outcomes) {
    probabilities.set(entry.outcome, JsonValue::number(entry.probability));
  }
  results.set("first_measurement", std::move(probabilities));
  results.set("deficit", JsonValue::number(dist_sym.deficit));
  JsonValue trace = JsonValue::array();
  for (const auto* record : {&first, &second}) {
    JsonValue step = JsonValue::object();
    step.set("location", JsonValue::string(record->projector_label.first));
    step.set("outcome", JsonValue::string(record->projector_label.second));
    step.set("probability", JsonValue::number(record->probability));
    trace.push_back(std::move(step));
  }
  results.set("trace", std::move(trace));
  report.set("results", std::move(results));
  return result;
}

inline void add_common_density_report(JsonValue& report,
                                      const ScenarioConfig& config) {
  report.set("scenario", JsonValue::string(to_string(config.scenario)));
  JsonValue inputs = JsonValue::object();
  inputs.set("statistics", JsonValue::string(to_string(config.statistics)));
  inputs.set("seed", JsonValue::integer(static_cast<long long>(config.seed)));
  JsonValue grid = JsonValue::object();
  grid.set("x_min", JsonValue::number(config.grid.x_min));
  grid.set("x_max", JsonValue::number(config.grid.x_max));
  grid.set("points",
           JsonValue::integer(static_cast<long long>(config.grid.points)));
  inputs.set("grid", std::move(grid));
  JsonValue wells = JsonValue::array();
  for (const auto& well : config.wells) {
    JsonValue entry = JsonValue::object();
    entry.set("left", JsonValue::number(well.left));
    entry.set("right", JsonValue::number(well.right));
    entry.set("n", JsonValue::integer(static_cast<long long>(well.n)));
    wells.push_back(std::move(entry));
  }
  inputs.set("wells", std::move(wells));
  report.set("inputs", std::move(inputs));
  report.set("states", JsonValue::object());
}

inline ScenarioReport build_densities(const ScenarioConfig& config) {
  const auto phi = make_box_eigenstate(config.wells[0].n, config.wells[0].left,
                                       config.wells[0].right, config.grid);
  const auto psi = make_box_eigenstate(config.wells[1].n, config.wells[1].left,
                                       config.wells[1].right, config.grid);

  const auto rho_1 = density_symmetrized(phi, psi, config.statistics, 1);
  const auto rho_2 = density_symmetrized(phi, psi, config.statistics, 2);
  const auto rho_other = density_symmetrized(
      phi, psi,
      config.statistics == ParticleStatistics::Boson
          ? ParticleStatistics::Fermion
          : ParticleStatistics::Boson,
      1);
  const auto product_1 = density_product(phi, psi, 1);
  const auto product_2 = density_product(phi, psi, 2);

  ScenarioReport result;
  auto& checks = result.checks;
  add_check(checks, "phi-normalized", std::abs(phi.norm_squared() - 1.0), 1e-8);
  add_check(checks, "psi-normalized", std::abs(psi.norm_squared() - 1.0), 1e-8);
  add_check(checks, "wavefunctions-orthogonal", std::abs(grid_inner(phi, psi)),
            1e-6);
  double pointwise = 0.0;
  for (std::size_t k = 0; k < rho_1.values.size(); ++k) {
    const double direct = 0.5 * (std::norm(phi.samples()[k]) +
                                 std::norm(psi.samples()[k]));
    pointwise = std::max(pointwise, std::abs(rho_1.values[k] - direct));
  }
  add_check(checks, "pointwise-identity", pointwise, 1e-12);
  add_check(checks, "which-independent",
            max_abs_difference(rho_1.values, rho_2.values), 1e-12);
  add_check(checks, "density-normalized", std::abs(rho_1.integral() - 1.0),
            1e-8);
  add_check(checks, "statistics-indifferent",
            max_abs_difference(rho_1.values, rho_other.values), 1e-12);
  add_check_flag(checks, "differs-from-product",
                 max_abs_difference(rho_1.values, product_1.values) > 1e-6,
                 max_abs_difference(rho_1.values, product_1.values));

  auto& report = result.report;
  add_common_density_report(report, config);
  JsonValue results = JsonValue::object();
  results.set("rho_symmetrized", profile_to_json(rho_1));
  results.set("rho_product_1", profile_to_json(product_1));
  results.set("rho_product_2", profile_to_json(product_2));
  results.set("integral", JsonValue::number(rho_1.integral()));
  report.set("results", std::move(results));
  result.csv_profile = rho_1;
  return result;
}

inline ScenarioReport build_disjoint_wells(const ScenarioConfig& config) {
  const auto phi = make_box_eigenstate(config.wells[0].n, config.wells[0].left,
                                       config.wells[0].right, config.grid);
  const auto psi = make_box_eigenstate(config.wells[1].n, config.wells[1].left,
                                       config.wells[1].right, config.grid);

  ScenarioReport result;
  auto& checks = result.checks;
  double overlap = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    overlap +=
        std::min(std::norm(phi.samples()[k]), std::norm(psi.samples()[k]));
  }
  overlap *= phi.dx();
  add_check_flag(checks, "supports-disjoint", disjoint_support(phi, psi),
                 overlap);
  if (!disjoint_support(phi, psi)) {
    throw ConfigError(
        "disjoint-wells scenario needs wells with non-overlapping supports");
  }

  const auto left_range =
      well_index_range(config.wells[0], config.grid, phi.size());
  const auto right_range =
      well_index_range(config.wells[1], config.grid, phi.size());
  const auto rho = density_symmetrized(phi, psi, config.statistics, 1);
  const auto rho_left =
      restricted_density(phi, psi, config.statistics, left_range);
  const auto rho_right =
      restricted_density(phi, psi, config.statistics, right_range);

  std::vector<double> phi_density(phi.size()), psi_density(psi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    phi_density[k] = std::norm(phi.samples()[k]);
    psi_density[k] = std::norm(psi.samples()[k]);
  }
  add_check(checks, "full-density-normalized", std::abs(rho.integral() - 1.0),
            1e-8);
  add_check(checks, "left-restriction-matches",
            max_abs_difference(rho_left.values, phi_density), 1e-8);
  add_check(checks, "right-restriction-matches",
            max_abs_difference(rho_right.values, psi_density), 1e-8);
  add_check(checks, "restricted-normalized",
            std::max(std::abs(rho_left.integral() - 1.0),
                     std::abs(rho_right.integral() - 1.0)),
            1e-8);

  auto& report = result.report;
  add_common_density_report(report, config);
  JsonValue results = JsonValue::object();
  results.set("overlap", JsonValue::number(overlap));
  results.set("rho_symmetrized", profile_to_json(rho));
  results.set("rho_restricted_left", profile_to_json(rho_left));
  results.set("rho_restricted_right", profile_to_json(rho_right));
  report.set("results", std::move(results));
  result.csv_profile = rho_left;
  return result;
}

}  // namespace detail

// Computes the scenario's states, checks, and report document. Problems
// caused by the configuration (impossible wells, non-orthogonal
// wavefunctions) surface as ConfigError.
inline ScenarioReport build_scenario_report(const ScenarioConfig& config) {
  ScenarioReport result;
  try {
    switch (config.scenario) {
      case ScenarioKind::NoCloning:
        result = detail::build_no_cloning(config);
        break;
      case ScenarioKind::WrongClone:
        result = detail::build_wrong_clone(config);
        break;
      case ScenarioKind::PhotonPair:
        result = detail::build_photon_pair(config);
        break;
      case ScenarioKind::Densities:
        result = detail::build_densities(config);
        break;
      case ScenarioKind::DisjointWells:
        result = detail::build_disjoint_wells(config);
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const ZeroNormState& e) {
    throw ConfigError(e.what());
  }
  result.report.set("checks", detail::checks_to_json(result.checks));
  result.report.set("all_pass", JsonValue::boolean(result.all_pass()));
  return result;
}

// No partial output files: write next to the target, then rename over it.
inline void atomic_write_file(const std::string& path,
                              const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path temp(target);
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file \"" + path + "\"");
    out << contents;
    out.flush();
    if (!out) throw ConfigError("cannot write output file \"" + path + "\"");
  }
  std::filesystem::rename(temp, target);
}

// Runs a scenario end to end. The JSON report goes to the output path, or
// to `out` when no path is set; with format csv the output path receives
// the density table instead and the report falls back to `out`.
inline int run_scenario(const ScenarioConfig& config, std::ostream& out,
                        std::ostream& err) {
  const ScenarioReport result = build_scenario_report(config);
  const std::string report_text = result.report.dump();
  if (config.format == ReportFormat::Csv) {
    if (!result.csv_profile) {
      throw ConfigError("scenario produced no density profile for csv output");
    }
    std::ostringstream csv;
    write_csv(csv, *result.csv_profile);
    if (config.output.empty()) {
      out << csv.str();
    } else {
      atomic_write_file(config.output, csv.str());
      out << report_text;
    }
  } else if (config.output.empty()) {
    out << report_text;
  } else {
    atomic_write_file(config.output, report_text);
  }
  if (!result.all_pass()) {
    for (const auto& check : result.checks) {
      if (!check.pass) {
        err << "check failed: " << check.name
            << " (error=" << format_double(check.error) << ")\n";
      }
    }
    return 1;
  }
  return 0;
}

}  // namespace symket
