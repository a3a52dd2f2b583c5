#pragma once

// Experiment configurations (TOML), presets and the run driver.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdpkit/product.hpp"
#include "rdpkit/rdp.hpp"
#include "rdpkit/solve.hpp"

namespace rdpkit {

struct McConfig {
  int runs = 50;
  int episodes = 1000;
  int n_step_limit = 50;
  double epsilon = 0.1;
  double gamma = 1.0;
  std::string update_mode = "average";  // average | overwrite
  std::uint64_t seed = 1;
  int eval_episodes = 100;
};

struct ViConfig {
  double gamma = 1.0;
  double tol = 1e-10;
  int max_iters = 100'000;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelSpec model;
  std::string algorithm = "mc";  // mc | vi
  McConfig mc;
  ViConfig vi;
  bool shaping = false;
  std::vector<std::string> shield;  // LDLf safety formulas
  bool shield_enforce = true;       // false: monitor only, do not filter actions
};

/// Parses a TOML document. `overrides` are "dotted.key=value" strings whose
/// value is TOML syntax (bare words are taken as strings). Throws ConfigError.
ExperimentConfig parse_config(std::string_view toml_text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
std::string to_toml(const ExperimentConfig& config);

std::vector<std::string> preset_names();
/// `size` applies to the exp1 family only (3..7). Throws UnknownPreset.
ExperimentConfig preset(std::string_view name, std::optional<int> size = std::nullopt);

/// A validated, compiled experiment.
struct Experiment {
  ExperimentConfig config;
  std::shared_ptr<const CompiledModel> model;
};

/// Builds the RDP, parses shield formulas and compiles every monitor.
Experiment prepare(const ExperimentConfig& config);

BatchParams batch_params(const ExperimentConfig& config);

/// Off-line product honoring the shield setting.
ExtendedMdp compile_product(const Experiment& e, std::size_t max_states = 1'000'000);

struct RunOptions {
  bool timing = false;  // record wall_time_ms (makes output non-reproducible)
  std::size_t dot_mdp_limit = 2000;
};

struct RunOutcome {
  std::vector<RunResult> runs;  // empty for value iteration
  std::optional<std::size_t> product_size;
  std::optional<double> reference;  // optimal value of the initial state
  double relfreq = 0.0;
  std::size_t unsafe_visits = 0;
};

/// Runs the experiment and writes episodes.csv (or policy.csv), summary.json
/// and DOT files into out_dir.
RunOutcome run_experiment(const Experiment& e, const std::filesystem::path& out_dir, const RunOptions& options = {});

/// Writes one DOT per monitor and the product DOT when small enough.
std::vector<std::filesystem::path> emit_dot(const Experiment& e, const std::filesystem::path& out_dir,
                                            std::size_t mdp_limit = 2000);

/// Process exit code for an exception: 2 configuration, 3 model, 4 resource.
int exit_code_for(const std::exception& e);

}  // namespace rdpkit
