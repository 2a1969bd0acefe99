#ifndef GRAPHON_LDP_EXPERIMENT_H_
#define GRAPHON_LDP_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace graphon_ldp {

enum class Command { kInfo, kRate, kSample, kEnsemble, kPsi, kScaling, kApprox };

std::string CommandName(Command command);
std::optional<Command> ParseCommand(const std::string& name);

// Everything a run depends on. Serialized verbatim into run.json; feeding
// that file back through --config reproduces the run.
struct ExperimentConfig {
  Command command = Command::kInfo;
  std::string ref = "builtin:const:0.5";
  // Second graphon for `rate` (h) and `approx` (f). Empty: command default.
  std::string h;
  std::size_t m = 32;
  std::uint64_t seed = 0;
  double beta = 0.5;
  std::vector<double> eps = {0.1, 0.05, 0.025};
  std::size_t n = 100;
  std::size_t count = 10;
  std::vector<double> thresholds;
  std::vector<std::size_t> k_list = {4, 8, 16};
  bool no_delta_start = false;
  bool verbose = false;
  std::string out_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json ToJson(const ExperimentConfig& config);
// Missing fields keep their defaults; unknown fields and bad types are
// kConfig errors.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);

// Range checks and reference resolution; throws kConfig.
void ValidateConfig(const ExperimentConfig& config);

struct RunOutcome {
  int exit_code = 0;
  // Written files, relative to out_dir.
  std::vector<std::string> artifacts;
  // Primary payload (also printed by the CLI).
  std::string summary;
};

// Executes the command and writes run.json plus the command's artifacts into
// config.out_dir (created if needed). On failure writes error.json and
// returns a nonzero exit code; the summary then holds the error JSON.
RunOutcome Run(const ExperimentConfig& config);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_EXPERIMENT_H_
