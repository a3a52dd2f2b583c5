#include <cmath>
#include <exception>

#include "rdpkit/rng.hpp"
#include "rdpkit/solve.hpp"

namespace rdpkit {

namespace {

RunResult run_one(const std::shared_ptr<const CompiledModel>& model, const BatchParams& params, int r) {
  const auto run = static_cast<std::uint64_t>(r);
  auto env = make_env(model, params, derive_seed(params.mc.seed, 3 * run));
  McParams mc = params.mc;
  mc.seed = derive_seed(params.mc.seed, 3 * run + 1);
  McResult learned = mc_control(*env, mc);

  RunResult out;
  for (const auto& e : learned.episodes) out.violations += e.violations;
  out.episodes = std::move(learned.episodes);

  BatchParams eval = params;
  eval.shaping = false;
  auto eval_env = make_env(model, eval, derive_seed(params.mc.seed, 3 * run + 2));
  out.eval_mean = evaluate_greedy(*eval_env, learned.q, params.eval_episodes, params.mc.gamma);
  return out;
}

}  // namespace

std::unique_ptr<EpisodicEnv> make_env(std::shared_ptr<const CompiledModel> model, const BatchParams& params,
                                      std::uint64_t seed) {
  ActionFilter filter;
  if (params.shield && model->has_safety()) filter = make_shield(model);
  std::unique_ptr<EpisodicEnv> env = std::make_unique<MonitoredEnv>(model, seed, params.n_step_limit, filter);
  if (params.shaping) env = std::make_unique<ShapedEnv>(std::move(env), ShapingPotential(model), params.mc.gamma);
  return env;
}

std::vector<RunResult> run_mc_batch(std::shared_ptr<const CompiledModel> model, const BatchParams& params) {
  std::vector<RunResult> out(static_cast<std::size_t>(params.runs));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < params.runs; ++r) {
    try {
      out[static_cast<std::size_t>(r)] = run_one(model, params, r);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<RunResult> run_mc_batch_serial(std::shared_ptr<const CompiledModel> model, const BatchParams& params) {
  std::vector<RunResult> out;
  for (int r = 0; r < params.runs; ++r) out.push_back(run_one(model, params, r));
  return out;
}

double relfreq_within_10pct(const std::vector<RunResult>& runs, double reference) {
  if (runs.empty()) return 0.0;
  const double threshold = reference - 0.1 * std::abs(reference);
  std::size_t hits = 0;
  for (const auto& r : runs)
    if (r.eval_mean >= threshold - 1e-9) ++hits;
  return static_cast<double>(hits) / static_cast<double>(runs.size());
}

}  // namespace rdpkit
