#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rdpkit/errors.hpp"
#include "rdpkit/experiment.hpp"

namespace rdpkit {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

bool shield_active(const Experiment& e) { return e.config.shield_enforce && e.model->has_safety(); }

}  // namespace

Experiment prepare(const ExperimentConfig& config) {
  Rdp rdp = build_rdp(config.model);
  std::vector<Formula> safety;
  for (std::size_t i = 0; i < config.shield.size(); ++i) {
    try {
      safety.push_back(parse_ldlf(config.shield[i]));
    } catch (const SyntaxError& err) {
      throw ConfigError("options.shield[" + std::to_string(i) + "]", err.what());
    }
  }
  Experiment e{config, std::make_shared<const CompiledModel>(std::move(rdp), std::move(safety))};
  if (shield_active(e)) {
    // Every shielded-reachable state must keep at least one action.
    try {
      compile_product(e, 200'000);
    } catch (const ResourceLimit&) {
    }
  }
  return e;
}

BatchParams batch_params(const ExperimentConfig& c) {
  BatchParams p;
  p.runs = c.mc.runs;
  p.mc.episodes = c.mc.episodes;
  p.mc.epsilon = c.mc.epsilon;
  p.mc.gamma = c.mc.gamma;
  p.mc.seed = c.mc.seed;
  p.mc.update_mode = c.mc.update_mode == "overwrite" ? UpdateMode::Overwrite : UpdateMode::Average;
  p.n_step_limit = c.mc.n_step_limit;
  p.shaping = c.shaping;
  p.shield = c.shield_enforce && !c.shield.empty();
  p.eval_episodes = c.mc.eval_episodes;
  return p;
}

ExtendedMdp compile_product(const Experiment& e, std::size_t max_states) {
  OfflineOptions o;
  o.max_states = max_states;
  if (shield_active(e)) o.allowed = make_shield(e.model);
  return compile_offline(*e.model, o);
}

std::vector<std::filesystem::path> emit_dot(const Experiment& e, const std::filesystem::path& out_dir,
                                            std::size_t mdp_limit) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  const CompiledModel& m = *e.model;
  auto emit = [&](const std::string& name, const std::string& text) {
    auto path = out_dir / (name + ".dot");
    write_file(path, text);
    written.push_back(path);
  };
  for (std::size_t i = 0; i < m.num_rewards(); ++i)
    emit("reward_" + std::to_string(i), to_dot(m.monitor(m.reward_monitor(i)), "reward_" + std::to_string(i)));
  for (std::size_t j = 0; j < m.num_quadruples(); ++j)
    emit("quadruple_" + std::to_string(j), to_dot(m.monitor(m.quadruple_monitor(j)), "quadruple_" + std::to_string(j)));
  for (std::size_t k = 0; k < m.num_safety(); ++k)
    emit("shield_" + std::to_string(k), to_dot(m.monitor(m.safety_monitor(k)), "shield_" + std::to_string(k)));
  try {
    ExtendedMdp mdp = compile_product(e, mdp_limit);
    emit("product", to_dot(mdp, "product"));
  } catch (const ResourceLimit&) {
  }
  return written;
}

RunOutcome run_experiment(const Experiment& e, const std::filesystem::path& out_dir, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  const ExperimentConfig& c = e.config;
  RunOutcome out;

  std::optional<ExtendedMdp> mdp;
  try {
    mdp = compile_product(e);
    out.product_size = mdp->size();
  } catch (const ResourceLimit&) {
  }

  nlohmann::ordered_json summary;
  if (c.algorithm == "vi") {
    if (!mdp) throw ResourceLimit("extended MDP too large for value iteration");
    ValueTable vt = value_iteration(*mdp, c.vi.gamma, c.vi.tol, c.vi.max_iters);
    out.reference = vt.v[static_cast<std::size_t>(mdp->initial)];
    std::string csv = "state,cell,action,value\n";
    for (std::size_t s = 0; s < mdp->size(); ++s) {
      csv += std::to_string(s) + "," + cell_name(mdp->states[s].base) + "," +
             (vt.policy[s] ? std::string(action_name(*vt.policy[s])) : std::string("-")) + "," + num(vt.v[s]) + "\n";
    }
    write_file(out_dir / "policy.csv", csv);
    summary["mean_return_by_episode"] = nlohmann::ordered_json::array();
    summary["relfreq_within_10pct"] = nullptr;
  } else {
    if (mdp) {
      try {
        out.reference = value_iteration(*mdp, c.mc.gamma).v[static_cast<std::size_t>(mdp->initial)];
      } catch (const NoConvergence&) {
      }
    }
    out.runs = run_mc_batch(e.model, batch_params(c));
    if (!out.reference) {
      double best = out.runs.front().eval_mean;
      for (const auto& r : out.runs) best = std::max(best, r.eval_mean);
      out.reference = best;
    }
    out.relfreq = relfreq_within_10pct(out.runs, *out.reference);

    std::string csv = "run,episode,return,steps,distinct_states\n";
    std::vector<double> mean(static_cast<std::size_t>(c.mc.episodes), 0.0);
    for (std::size_t r = 0; r < out.runs.size(); ++r) {
      out.unsafe_visits += out.runs[r].violations;
      const auto& eps = out.runs[r].episodes;
      for (std::size_t k = 0; k < eps.size(); ++k) {
        csv += std::to_string(r) + "," + std::to_string(k) + "," + num(eps[k].ret) + "," + std::to_string(eps[k].steps) +
               "," + std::to_string(eps[k].distinct_states) + "\n";
        mean[k] += eps[k].ret;
      }
    }
    for (double& m : mean) m /= static_cast<double>(out.runs.size());
    write_file(out_dir / "episodes.csv", csv);
    summary["mean_return_by_episode"] = mean;
    summary["relfreq_within_10pct"] = out.relfreq;
  }
  if (out.product_size) summary["extended_mdp_size"] = *out.product_size;
  else summary["extended_mdp_size"] = nullptr;
  summary["unsafe_visits"] = out.unsafe_visits;

  emit_dot(e, out_dir, options.dot_mdp_limit);

  if (options.timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    summary["wall_time_ms"] = ms;
  } else {
    summary["wall_time_ms"] = nullptr;
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UnknownPreset*>(&e)) return 2;
  if (dynamic_cast<const ResourceLimit*>(&e)) return 4;
  if (dynamic_cast<const Error*>(&e)) return 3;
  return 1;
}

}  // namespace rdpkit
