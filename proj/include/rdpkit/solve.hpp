#pragma once

// Value iteration, first-visit Monte Carlo control, potential-based shaping
// over monitor distances, and the preemptive shield.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rdpkit/product.hpp"

namespace rdpkit {

// ---------------------------------------------------------------- planning

struct ValueTable {
  std::vector<double> v;
  std::vector<std::optional<Action>> policy;  // nullopt at terminals and action-less states
  int iterations = 0;
};

/// Relative tolerance for treating two action values as tied; ties go to
/// the first action in n, e, s, w order.
inline constexpr double kTieTolerance = 1e-6;

/// Jacobi value iteration, parallel over states with OpenMP.
ValueTable value_iteration(const ExtendedMdp& m, double gamma, double tol = 1e-10, int max_iters = 100'000);
/// Same sweeps, single thread. Produces bit-identical results.
ValueTable value_iteration_serial(const ExtendedMdp& m, double gamma, double tol = 1e-10, int max_iters = 100'000);

/// Q(s, a) under v; nullopt when a has no transitions at s.
std::optional<double> q_value(const ExtendedMdp& m, const std::vector<double>& v, int s, Action a, double gamma);

// ------------------------------------------------------------------ shield

/// Actions whose every possible successor keeps all safety monitors live.
/// Throws EmptyShield if none is left.
std::vector<Action> shield_actions(const CompiledModel& model, const ExtendedState& s);

ActionFilter make_shield(std::shared_ptr<const CompiledModel> model);

// ----------------------------------------------------------------- shaping

/// Phi(s) = -sum_i kappa_i * min(d_i(q_i), D_i) over reward rules with a
/// positive reward, kappa_i = r_i / (D_i + 1); Phi = 0 at terminals.
class ShapingPotential {
 public:
  explicit ShapingPotential(std::shared_ptr<const CompiledModel> model);

  double operator()(const ExtendedState& s) const;
  double kappa(std::size_t rule) const { return kappa_.at(rule); }

 private:
  std::shared_ptr<const CompiledModel> model_;
  std::vector<double> kappa_;  // 0 for rules that are not shaped
  std::vector<int> clip_;
};

/// Rewards become r + gamma * Phi(s') - Phi(s).
class ShapedEnv : public EpisodicEnv {
 public:
  ShapedEnv(std::unique_ptr<EpisodicEnv> inner, ShapingPotential phi, double gamma);

  const ExtendedState& reset() override { return inner_->reset(); }
  StepResult step(Action a) override;
  std::vector<Action> allowed_actions() const override { return inner_->allowed_actions(); }
  const ExtendedState& state() const override { return inner_->state(); }
  bool done() const override { return inner_->done(); }
  std::size_t violations() const override { return inner_->violations(); }

 private:
  std::unique_ptr<EpisodicEnv> inner_;
  ShapingPotential phi_;
  double gamma_;
};

ExtendedMdp shape_mdp(const ExtendedMdp& m, const ShapingPotential& phi, double gamma);

// --------------------------------------------------------------- learning

class QTable {
 public:
  /// Dense id for a state, allocating one on first sight.
  int intern(const ExtendedState& s);
  std::optional<int> find(const ExtendedState& s) const;
  std::size_t size() const noexcept { return q_.size(); }

  double q(int s, Action a) const { return q_.at(static_cast<std::size_t>(s))[static_cast<std::size_t>(a)]; }
  std::uint32_t count(int s, Action a) const { return n_.at(static_cast<std::size_t>(s))[static_cast<std::size_t>(a)]; }
  void set(int s, Action a, double value) { q_.at(static_cast<std::size_t>(s))[static_cast<std::size_t>(a)] = value; }
  void bump(int s, Action a) { ++n_.at(static_cast<std::size_t>(s))[static_cast<std::size_t>(a)]; }

  /// Highest-valued allowed action, first in n, e, s, w order on ties.
  Action greedy(int s, const std::vector<Action>& allowed) const;
  Action greedy(const ExtendedState& s, const std::vector<Action>& allowed) const;

 private:
  std::unordered_map<ExtendedState, int, ExtendedStateHash> index_;
  std::vector<std::array<double, kNumActions>> q_;
  std::vector<std::array<std::uint32_t, kNumActions>> n_;
};

enum class UpdateMode { Average, Overwrite };

struct McParams {
  int episodes = 1000;
  double epsilon = 0.1;
  double gamma = 1.0;
  std::uint64_t seed = 0;  // exploration stream
  UpdateMode update_mode = UpdateMode::Average;
};

struct EpisodeStats {
  double ret = 0.0;  // discounted task return, unshaped
  int steps = 0;
  std::size_t distinct_states = 0;  // cumulative over the run
  std::size_t violations = 0;
};

struct McResult {
  QTable q;
  std::vector<EpisodeStats> episodes;
};

/// Epsilon-greedy choice: uniform over `allowed` with probability epsilon,
/// greedy otherwise.
Action epsilon_greedy(const QTable& q, const ExtendedState& s, const std::vector<Action>& allowed, double epsilon,
                      std::mt19937_64& rng);

/// First-visit Monte Carlo control.
McResult mc_control(EpisodicEnv& env, const McParams& params);

/// Mean return of the greedy policy over `episodes` episodes. Unseen states
/// fall back to the first allowed action.
double evaluate_greedy(EpisodicEnv& env, const QTable& q, int episodes, double gamma);

// ------------------------------------------------------- experiment batches

struct BatchParams {
  int runs = 50;
  McParams mc;
  int n_step_limit = 50;
  bool shaping = false;
  bool shield = false;
  int eval_episodes = 100;
};

struct RunResult {
  std::vector<EpisodeStats> episodes;
  double eval_mean = 0.0;
  std::size_t violations = 0;
};

/// Runs are independent: run r uses streams derived from (mc.seed, r).
/// Parallel over runs with OpenMP.
std::vector<RunResult> run_mc_batch(std::shared_ptr<const CompiledModel> model, const BatchParams& params);
std::vector<RunResult> run_mc_batch_serial(std::shared_ptr<const CompiledModel> model, const BatchParams& params);

/// Builds the environment run `r` of a batch uses.
std::unique_ptr<EpisodicEnv> make_env(std::shared_ptr<const CompiledModel> model, const BatchParams& params,
                                      std::uint64_t seed);

/// Fraction of runs whose evaluation mean is within 10% of `reference`.
double relfreq_within_10pct(const std::vector<RunResult>& runs, double reference);

}  // namespace rdpkit
