#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "moyal/acceptance.hpp"
#include "moyal/grid.hpp"

namespace moyal {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string> experiment_names = {"catalog", "residual", "identities", "transform",
                                                         "match",   "evolve",   "all"};

struct ExperimentConfig {
  std::string experiment = "all";
  std::string entry;                               // catalog id; empty lists the catalog
  nlohmann::json params = nlohmann::json::object();
  std::optional<nlohmann::json> grid;              // {x_min, x_max, p_min, p_max, nx, np}
  std::string backend = "analytic";                // or a derivative backend spec
  std::map<std::string, double> tolerances;       // overrides by check key
  double tol_scale = 1;
  std::uint64_t seed = 7;
  int trials = 100;
  int jobs = 0;                                    // 0: hardware concurrency
  std::vector<std::pair<double, double>> times = {{0, 0}, {1, 0}, {1, 0.5}};  // z = t - i s
  std::string out;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);  // throws ConfigError on unknown keys
  // Builds grid, backend and catalog entry once; throws ConfigError with the cause.
  void validate() const;
};

struct Artifact {
  std::string name;
  std::string content;
};

struct ExperimentOutcome {
  bool pass = false;
  std::vector<std::string> failures;  // names of failing checks
  nlohmann::json report;
  std::vector<Artifact> artifacts;
  std::vector<std::string> log;       // human-readable lines, one per criterion for `all`
};

// Runs each task, possibly concurrently; the default runs them in order.
using TaskRunner = std::function<void(std::vector<std::function<void()>>& tasks, int jobs)>;

ExperimentOutcome run_experiment(const ExperimentConfig& config, const TaskRunner& runner = {});

// JSON text with every floating value printed with 17 significant digits.
std::string dump_fixed(const nlohmann::json& j, int indent = 2);

}  // namespace moyal
