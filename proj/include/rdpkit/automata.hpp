#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "rdpkit/logic.hpp"

namespace rdpkit {

using StateId = int;

struct DfaEdge {
  BoolExpr guard;
  StateId target;
};

/// Complete deterministic automaton over the alphabet 2^props with
/// symbolic guards. For every state the guards partition 2^props.
class Dfa {
 public:
  Dfa(std::vector<Prop> props, StateId initial, std::vector<bool> accepting,
      std::vector<std::vector<DfaEdge>> edges);

  const std::vector<Prop>& props() const noexcept { return props_; }
  StateId initial() const noexcept { return initial_; }
  std::size_t num_states() const noexcept { return accepting_.size(); }
  bool is_accepting(StateId q) const { return accepting_.at(static_cast<std::size_t>(q)); }
  const std::vector<DfaEdge>& edges(StateId q) const { return edges_.at(static_cast<std::size_t>(q)); }

 private:
  std::vector<Prop> props_;
  StateId initial_;
  std::vector<bool> accepting_;
  std::vector<std::vector<DfaEdge>> edges_;
};

struct CompileOptions {
  std::size_t max_states = 100'000;
};

/// LDLf to minimal complete DFA. Every proposition of `f` must be in `props`.
Dfa compile(const Formula& f, const std::set<Prop>& props, const CompileOptions& options = {});

StateId dfa_step(const Dfa& d, StateId q, const Label& label);
bool dfa_accepts(const Dfa& d, const Trace& h);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

struct DfaAnalysis {
  std::vector<int> distance;  // edges to the nearest accepting state, kUnreachable if none
  std::set<StateId> dead;

  bool is_dead(StateId q) const { return distance.at(static_cast<std::size_t>(q)) == kUnreachable; }
  /// Largest finite distance.
  int max_finite_distance() const;
};

DfaAnalysis analyze(const Dfa& d);

std::string to_dot(const Dfa& d, const std::string& name = "dfa");
std::string to_json(const Dfa& d);

}  // namespace rdpkit
