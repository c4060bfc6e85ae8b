#ifndef SQGFRONT_EXPERIMENT_HPP
#define SQGFRONT_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>

#include "json.hpp"
#include "sqgfront/evolution.hpp"

namespace sqg {

// Exit codes shared by the library and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericalFailure = 2;

struct ExperimentResult {
  int exit_code = kExitOk;
  nlohmann::json summary;  // also written to <out>/summary.json on success
  std::string error;       // line-anchored diagnostic on config errors
};

// Parsed experiment configuration. Top-level keys: kind, grid, solver, datum,
// plus kind-specific sections; unknown kinds and malformed sections are
// reported with a JSON-pointer diagnostic.
struct ExperimentConfig {
  std::string kind;
  GridSpec grid;
  SolverConfig solver;
  nlohmann::json datum;
  nlohmann::json extra;  // kind-specific section
  std::string config_hash;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);

// Builds the initial datum named by the config (gaussian / mode / noise).
Field build_datum(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const std::filesystem::path& config_path,
                                const std::filesystem::path& out_dir,
                                std::optional<std::uint64_t> seed_override);

}  // namespace sqg

#endif
