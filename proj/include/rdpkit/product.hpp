#pragma once

// Extended MDPs: an RDP run in lock-step with one DFA monitor per reward
// rule, per transition quadruple and per safety formula.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "rdpkit/automata.hpp"
#include "rdpkit/rdp.hpp"

namespace rdpkit {

/// Monitor tuple (reward monitors, then quadruple monitors, then safety
/// monitors), one bit per once-mode reward rule that has already paid out,
/// and the base cell.
struct ExtendedState {
  std::vector<StateId> monitors;
  std::uint32_t fired = 0;
  Cell base;

  friend bool operator==(const ExtendedState&, const ExtendedState&) = default;
};

struct ExtendedStateHash {
  std::size_t operator()(const ExtendedState& s) const noexcept;
};

inline Cell project(const ExtendedState& s) { return s.base; }

class CompiledModel {
 public:
  explicit CompiledModel(Rdp rdp, std::vector<Formula> safety = {}, const CompileOptions& options = {});

  const Rdp& rdp() const noexcept { return rdp_; }
  const GridWorld& world() const noexcept { return rdp_.world(); }

  std::size_t num_rewards() const noexcept { return rdp_.rewards().size(); }
  std::size_t num_quadruples() const noexcept { return rdp_.quadruples().size(); }
  std::size_t num_safety() const noexcept { return safety_.size(); }
  std::size_t num_monitors() const noexcept { return dfas_.size(); }
  bool has_safety() const noexcept { return !safety_.empty(); }

  /// All monitors in tuple order.
  const std::vector<Dfa>& monitors() const noexcept { return dfas_; }
  const Dfa& monitor(std::size_t k) const { return dfas_.at(k); }
  const DfaAnalysis& analysis(std::size_t k) const { return analyses_.at(k); }
  const std::vector<Formula>& safety_formulas() const noexcept { return safety_; }

  std::size_t reward_monitor(std::size_t i) const noexcept { return i; }
  std::size_t quadruple_monitor(std::size_t j) const noexcept { return num_rewards() + j; }
  std::size_t safety_monitor(std::size_t k) const noexcept { return num_rewards() + num_quadruples() + k; }
  /// Bit of ExtendedState::fired owned by reward rule i, -1 for every-mode rules.
  int once_bit(std::size_t i) const { return once_bit_.at(i); }

  /// Monitor k from state q on the label of `cell`.
  StateId next(std::size_t k, StateId q, Cell cell) const;

  /// Monitors advanced on L(start), nothing fired.
  ExtendedState initial_state() const;

  bool is_terminal(const ExtendedState& s) const { return world().is_terminal(s.base); }
  /// True when some safety monitor is in a dead state.
  bool violates_safety(const ExtendedState& s) const;

  std::optional<std::size_t> match(const ExtendedState& s, Action a) const;
  std::vector<std::pair<Cell, double>> successors(const ExtendedState& s, Action a) const;

  struct Advance {
    ExtendedState next;
    double reward;
  };
  /// Moves to `cell`, advances every monitor and collects the reward.
  Advance advance(const ExtendedState& s, Cell cell) const;

 private:
  Rdp rdp_;
  std::vector<Formula> safety_;
  std::vector<Dfa> dfas_;
  std::vector<DfaAnalysis> analyses_;
  std::vector<Dfa> quad_dfas_;
  std::vector<std::vector<StateId>> next_;  // [k][q * cells + cell]
  std::vector<int> once_bit_;               // per reward rule, -1 if every-mode
};

/// Restricts the actions considered at a state (e.g. a shield). Returning an
/// empty list leaves the state without outgoing transitions.
using ActionFilter = std::function<std::vector<Action>(const ExtendedState&)>;

struct MdpTransition {
  int next;
  double prob;
  double reward;
};

struct ExtendedMdp {
  std::vector<ExtendedState> states;
  std::vector<bool> terminal;
  std::vector<std::array<std::vector<MdpTransition>, kNumActions>> transitions;
  int initial = 0;

  std::size_t size() const noexcept { return states.size(); }
  const std::vector<MdpTransition>& out(int s, Action a) const {
    return transitions.at(static_cast<std::size_t>(s))[static_cast<std::size_t>(a)];
  }
  /// Index of a state, or -1.
  int find(const ExtendedState& s) const;
};

struct OfflineOptions {
  std::size_t max_states = 1'000'000;
  ActionFilter allowed;  // default: every action
};

/// Reachable-only product by frontier search, enumerating the full successor
/// support of every (state, action).
ExtendedMdp compile_offline(const CompiledModel& model, const OfflineOptions& options = {});

std::string state_name(const ExtendedState& s);  // "(q0,q1) s23"
std::string to_dot(const ExtendedMdp& m, const std::string& name = "mdp");
std::string to_json(const ExtendedMdp& m);

struct StepResult {
  ExtendedState state;
  double reward;       // reward seen by the learner
  double task_reward;  // unshaped reward of the model
  bool done;
};

/// Episodic environment interface used by the learners.
class EpisodicEnv {
 public:
  virtual ~EpisodicEnv() = default;
  virtual const ExtendedState& reset() = 0;
  virtual StepResult step(Action a) = 0;
  virtual std::vector<Action> allowed_actions() const = 0;
  virtual const ExtendedState& state() const = 0;
  virtual bool done() const = 0;
  /// Steps in the current episode that moved a safety monitor into a dead state.
  virtual std::size_t violations() const = 0;
};

/// On-line view: samples successors with its own random stream.
class MonitoredEnv : public EpisodicEnv {
 public:
  /// `n_step_limit` of 0 means no truncation.
  MonitoredEnv(std::shared_ptr<const CompiledModel> model, std::uint64_t seed, int n_step_limit = 0,
               ActionFilter filter = {});

  const ExtendedState& reset() override;
  StepResult step(Action a) override;
  /// Same as step with an explicit draw in [0,1).
  StepResult step_with_draw(Action a, double u);
  std::vector<Action> allowed_actions() const override;
  const ExtendedState& state() const override { return state_; }
  bool done() const override { return done_; }
  std::size_t violations() const override { return violations_; }

  int steps() const noexcept { return steps_; }
  const CompiledModel& model() const noexcept { return *model_; }

 private:
  std::shared_ptr<const CompiledModel> model_;
  std::mt19937_64 rng_;
  int limit_;
  ActionFilter filter_;
  ExtendedState state_;
  int steps_ = 0;
  bool done_ = true;
  std::size_t violations_ = 0;
};

}  // namespace rdpkit
