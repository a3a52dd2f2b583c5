// rdpkit command-line front end.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rdpkit/errors.hpp"
#include "rdpkit/experiment.hpp"

using namespace rdpkit;

namespace {

void report(const RunOutcome& r, const std::filesystem::path& out) {
  std::cerr << "wrote " << out.string() << ": extended_mdp_size=";
  if (r.product_size) std::cerr << *r.product_size;
  else std::cerr << "n/a";
  if (!r.runs.empty()) std::cerr << " relfreq_within_10pct=" << r.relfreq << " unsafe_visits=" << r.unsafe_visits;
  if (r.reference) std::cerr << " optimum=" << *r.reference;
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular decision processes with LDLf monitors"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool timing = false;

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "TOML config")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--set", overrides, "Override a config key: key=value");
  run->add_flag("--timing", timing, "Record wall_time_ms in summary.json");

  std::string preset_name;
  std::optional<int> size;
  std::optional<std::string> preset_out;
  auto* pre = app.add_subcommand("preset", "Print a preset config, or run it when --out is given");
  pre->add_option("name", preset_name, "Preset name")->required();
  pre->add_option("--size", size, "Grid size for the exp1 presets (3..7)");
  pre->add_option("--out", preset_out, "Run the preset and write artifacts here");
  pre->add_option("--seed", seed, "Master seed");
  pre->add_option("--set", overrides, "Override a config key: key=value");
  pre->add_flag("--timing", timing, "Record wall_time_ms in summary.json");

  std::string dot_out;
  auto* dot = app.add_subcommand("dot", "Write DOT files for every automaton and the product");
  dot->add_option("config", config_path, "TOML config")->required();
  dot->add_option("--out", dot_out, "Output directory")->required();

  auto* list = app.add_subcommand("list", "List preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (seed) overrides.push_back("algorithm.mc.seed=" + std::to_string(*seed));
    if (*run) {
      Experiment e = prepare(load_config(config_path, overrides));
      report(run_experiment(e, out_dir, {timing}), out_dir);
    } else if (*pre) {
      ExperimentConfig c = preset(preset_name, size);
      if (!overrides.empty()) c = parse_config(to_toml(c), overrides);
      if (!preset_out) {
        std::cout << to_toml(c);
        return 0;
      }
      Experiment e = prepare(c);
      std::filesystem::create_directories(*preset_out);
      std::ofstream(std::filesystem::path(*preset_out) / "config.toml", std::ios::binary) << to_toml(c);
      report(run_experiment(e, *preset_out, {timing}), *preset_out);
    } else if (*dot) {
      Experiment e = prepare(load_config(config_path));
      for (const auto& p : emit_dot(e, dot_out)) std::cout << p.string() << "\n";
    } else if (*list) {
      for (const auto& n : preset_names()) std::cout << n << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
