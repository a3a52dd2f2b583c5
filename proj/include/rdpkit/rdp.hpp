#pragma once

// Regular decision processes over grid worlds.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdpkit/automata.hpp"
#include "rdpkit/logic.hpp"

namespace rdpkit {

enum class Action : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

inline constexpr std::array<Action, 4> kActions{Action::North, Action::East, Action::South, Action::West};
inline constexpr std::size_t kNumActions = kActions.size();

std::string_view action_name(Action a);
std::optional<Action> parse_action(std::string_view name);

/// Grid cell, 1-based; x grows to the right, y grows downwards.
struct Cell {
  int x = 1;
  int y = 1;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string cell_name(Cell c);  // "s23" style

class GridWorld {
 public:
  GridWorld(int width, int height, Cell start, std::set<Cell> terminals = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Cell start() const noexcept { return start_; }
  const std::set<Cell>& terminals() const noexcept { return terminals_; }

  bool in_bounds(Cell c) const noexcept;
  bool is_terminal(Cell c) const { return terminals_.contains(c); }
  std::size_t num_cells() const noexcept { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }
  std::size_t index(Cell c) const;  // row-major
  Cell cell_at(std::size_t index) const;

  /// x_is1..x_isW, y_is1..y_isH.
  std::set<Prop> props() const;

  /// Intended move; moves off the grid stay in place.
  Cell move(Cell c, Action a) const;

 private:
  int width_;
  int height_;
  Cell start_;
  std::set<Cell> terminals_;
};

/// One-hot coordinate label {x_is<x>, y_is<y>}.
Label label(const GridWorld& w, Cell c);

/// Inverse of `label`; nullopt unless exactly one x- and one y-prop are set
/// and nothing else.
std::optional<Cell> cell_of(const GridWorld& w, const Label& l);

struct Outcome {
  Label assignment;  // affected props that become true; the others become false
  double probability = 0.0;
};

struct TransitionQuadruple {
  Formula guard;
  Action action;
  std::set<Prop> affected;
  std::vector<Outcome> dist;
};

enum class RewardMode { Every, Once };

struct RewardRule {
  Formula guard;
  double reward = 0.0;
  RewardMode mode = RewardMode::Every;
};

struct Dynamics {
  double success_prob = 1.0;
};

class Rdp {
 public:
  /// Validates every invariant; violations raise ConfigError naming the field.
  Rdp(GridWorld world, std::vector<TransitionQuadruple> quadruples, std::vector<RewardRule> rewards,
      Dynamics dynamics = {}, double step_cost = 0.0);

  const GridWorld& world() const noexcept { return world_; }
  const std::set<Prop>& props() const noexcept { return props_; }
  const std::vector<TransitionQuadruple>& quadruples() const noexcept { return quadruples_; }
  const std::vector<RewardRule>& rewards() const noexcept { return rewards_; }
  const Dynamics& dynamics() const noexcept { return dynamics_; }
  double step_cost() const noexcept { return step_cost_; }

 private:
  GridWorld world_;
  std::set<Prop> props_;
  std::vector<TransitionQuadruple> quadruples_;
  std::vector<RewardRule> rewards_;
  Dynamics dynamics_;
  double step_cost_;
};

/// Index of the unique quadruple for `a` whose monitor accepts. `monitors`
/// and `states` are aligned with m.quadruples().
std::optional<std::size_t> match_quadruple(const Rdp& m, const std::vector<Dfa>& monitors,
                                           const std::vector<StateId>& states, Action a);

/// Successor cells with probabilities, in sampling order. Default dynamics
/// give [intended move, stay]; a fired quadruple gives its outcomes in
/// declared order. Zero-probability entries are dropped, duplicates merged.
std::vector<std::pair<Cell, double>> successor_distribution(const Rdp& m, Cell c, Action a,
                                                            std::optional<std::size_t> fired);

/// Inverse-CDF sample of successor_distribution with the draw u in [0,1).
Cell apply_transition(const Rdp& m, Cell c, Action a, std::optional<std::size_t> fired, double u);

// Declarative model description, formulas as text.

struct OutcomeSpec {
  std::vector<std::string> assignment;
  double probability = 0.0;
};

struct QuadrupleSpec {
  std::string guard;
  std::string action;
  std::vector<std::string> affected;
  std::vector<OutcomeSpec> outcomes;
};

struct RewardSpec {
  std::string guard;
  double value = 0.0;
  std::string mode = "every";  // every | once
};

struct ModelSpec {
  int width = 1;
  int height = 1;
  Cell start{1, 1};
  std::vector<Cell> terminals;
  double success_prob = 1.0;
  double step_cost = 0.0;
  std::vector<QuadrupleSpec> quadruples;
  std::vector<RewardSpec> rewards;
};

/// Throws ConfigError with a dotted field path such as "quadruples[1].guard".
Rdp build_rdp(const ModelSpec& spec);

}  // namespace rdpkit
