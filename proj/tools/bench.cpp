// OpenMP kernels against their single-thread references.

#include <map>

#include <benchmark/benchmark.h>

#include "rdpkit/experiment.hpp"

using namespace rdpkit;

namespace {

// A wide stochastic grid with a three-waypoint goal gives a product of a few
// thousand states.
const ExtendedMdp& big_mdp(int n) {
  static std::map<int, ExtendedMdp> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  ExperimentConfig c;
  c.model.width = n;
  c.model.height = n;
  c.model.terminals = {{n, n}};
  c.model.success_prob = 0.8;
  c.model.step_cost = -1.0;
  const std::string mid = std::to_string(n / 2);
  c.model.rewards.push_back({"<true*; x_is1 & y_is" + std::to_string(n) + "; true*; x_is" + mid + " & y_is" + mid +
                                 "; true*; x_is" + std::to_string(n) + " & y_is1; true*>end",
                             100.0, "once"});
  return cache.emplace(n, compile_product(prepare(c))).first->second;
}

void BM_value_iteration(benchmark::State& state) {
  const ExtendedMdp& m = big_mdp(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(m, 0.95, 1e-8));
  state.counters["states"] = static_cast<double>(m.size());
}

void BM_value_iteration_serial(benchmark::State& state) {
  const ExtendedMdp& m = big_mdp(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration_serial(m, 0.95, 1e-8));
  state.counters["states"] = static_cast<double>(m.size());
}

BatchParams batch(const Experiment& e) {
  BatchParams p = batch_params(e.config);
  p.runs = 16;
  p.mc.episodes = 200;
  return p;
}

void BM_mc_batch(benchmark::State& state) {
  const Experiment e = prepare(preset("exp2"));
  const BatchParams p = batch(e);
  for (auto _ : state) benchmark::DoNotOptimize(run_mc_batch(e.model, p));
}

void BM_mc_batch_serial(benchmark::State& state) {
  const Experiment e = prepare(preset("exp2"));
  const BatchParams p = batch(e);
  for (auto _ : state) benchmark::DoNotOptimize(run_mc_batch_serial(e.model, p));
}

}  // namespace

BENCHMARK(BM_value_iteration)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_value_iteration_serial)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_batch)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_batch_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
