#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellest/scenario.hpp"

namespace ellest {

enum class Command { kEstimate, kTest, kSimulate, kDistances, kCheckAssumptions };
std::string to_string(Command c);
Command command_from_string(const std::string& s);

struct OutputSpec {
  std::string directory = "out";
  // Any of csv, json-lines, summary.
  std::vector<std::string> formats = {"csv", "summary"};
  bool timing = false;  // adds runtime columns to record files
};

enum class ExperimentType { kEstimation, kDeviation, kRate };

struct ExperimentSpec {
  ExperimentType type = ExperimentType::kEstimation;
  std::vector<double> xis = {0.5, 1.0, 2.0};
  std::vector<std::size_t> ns;
  double grid_exponent = 0.0;
};

// Operands of the test and distances commands.
struct PairSpec {
  MeasureSpec p;
  MeasureSpec q;
  std::optional<MeasureSpec> truth;
  LossSpec loss;
  std::size_t n = 0;
  std::size_t replications = 0;  // > 0 runs the Monte Carlo error study
  std::vector<double> data;      // observations instead of a draw from truth
  bool devroye_lugosi = false;
};

struct AssumptionSpec {
  LossSpec loss;
  std::size_t space_size = 5;
  std::size_t spaces = 200;
};

struct RunConfig {
  Command command = Command::kEstimate;
  std::optional<std::uint64_t> seed;
  double epsilon = 1.0;
  int threads = 1;
  int verbosity = 0;
  OutputSpec output;
  std::optional<Scenario> scenario;  // estimate, simulate
  std::vector<double> data;          // estimate: observations instead of a draw
  ExperimentSpec experiment;         // simulate
  PairSpec pair;                     // test, distances
  AssumptionSpec assumptions;        // check-assumptions
};

// `command` may be supplied by the caller when the document has none.
RunConfig run_config_from_json(const nlohmann::json& j, std::optional<Command> command = std::nullopt,
                               const std::string& path = "config");
RunConfig load_run_config(const std::string& file, std::optional<Command> command = std::nullopt);
// Resolved form; run_config_from_json(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& c);

// Propagates seed and epsilon into the scenario and checks per-command
// requirements (seed for simulate, operands present).
void finalize(RunConfig& c);

// "tv", "hellinger", "kl[:a]", "wasserstein", "lj[:j]", "linf[:cells]".
LossSpec loss_spec_from_string(const std::string& s);

}  // namespace ellest
