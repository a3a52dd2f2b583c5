#include <cmath>

#include "rdpkit/errors.hpp"
#include "rdpkit/rdp.hpp"

namespace rdpkit {

namespace {

std::string at(const char* list, std::size_t i, const char* field) {
  return std::string(list) + "[" + std::to_string(i) + "]" + (field[0] ? "." : "") + field;
}

void check_props(const std::set<Prop>& known, const std::set<Prop>& used, const std::string& field) {
  for (const auto& p : used)
    if (!known.contains(p)) throw ConfigError(field, "unknown proposition '" + p.name() + "'");
}

}  // namespace

Rdp::Rdp(GridWorld world, std::vector<TransitionQuadruple> quadruples, std::vector<RewardRule> rewards,
         Dynamics dynamics, double step_cost)
    : world_(std::move(world)),
      props_(world_.props()),
      quadruples_(std::move(quadruples)),
      rewards_(std::move(rewards)),
      dynamics_(dynamics),
      step_cost_(step_cost) {
  if (!(dynamics_.success_prob >= 0.0 && dynamics_.success_prob <= 1.0))
    throw ConfigError("dynamics.success_prob", "must lie in [0, 1]");
  if (!std::isfinite(step_cost_)) throw ConfigError("step_cost", "must be finite");

  for (std::size_t i = 0; i < quadruples_.size(); ++i) {
    const auto& q = quadruples_[i];
    check_props(props_, q.guard.props(), at("quadruples", i, "guard"));
    check_props(props_, q.affected, at("quadruples", i, "affected"));
    if (q.dist.empty()) throw ConfigError(at("quadruples", i, "outcomes"), "distribution is empty");
    double sum = 0.0;
    for (std::size_t k = 0; k < q.dist.size(); ++k) {
      const auto& o = q.dist[k];
      const std::string field = at("quadruples", i, "outcomes") + "[" + std::to_string(k) + "]";
      if (!(o.probability >= 0.0 && o.probability <= 1.0)) throw ConfigError(field + ".probability", "must lie in [0, 1]");
      for (const auto& p : o.assignment)
        if (!q.affected.contains(p)) throw ConfigError(field + ".assignment", "'" + p.name() + "' is not an affected proposition");
      for (std::size_t j = 0; j < k; ++j)
        if (q.dist[j].assignment == o.assignment) throw ConfigError(field + ".assignment", "duplicate assignment");
      sum += o.probability;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError(at("quadruples", i, "outcomes"), "probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  for (std::size_t i = 0; i < rewards_.size(); ++i) {
    check_props(props_, rewards_[i].guard.props(), at("rewards", i, "guard"));
    if (!std::isfinite(rewards_[i].reward)) throw ConfigError(at("rewards", i, "value"), "must be finite");
  }
}

std::optional<std::size_t> match_quadruple(const Rdp& m, const std::vector<Dfa>& monitors,
                                           const std::vector<StateId>& states, Action a) {
  const auto& quads = m.quadruples();
  if (monitors.size() != quads.size() || states.size() != quads.size())
    throw ContractViolation("match_quadruple: monitor vectors not aligned with quadruples");
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < quads.size(); ++i)
    if (quads[i].action == a && monitors[i].is_accepting(states[i])) hits.push_back(i);
  if (hits.size() > 1) throw MutualExclusionViolation(hits);
  if (hits.empty()) return std::nullopt;
  return hits.front();
}

std::vector<std::pair<Cell, double>> successor_distribution(const Rdp& m, Cell c, Action a,
                                                            std::optional<std::size_t> fired) {
  const GridWorld& w = m.world();
  std::vector<std::pair<Cell, double>> out;
  auto add = [&](Cell n, double p) {
    if (p <= 0.0) return;
    for (auto& [cell, q] : out) {
      if (cell == n) {
        q += p;
        return;
      }
    }
    out.emplace_back(n, p);
  };

  if (!fired) {
    const double p = m.dynamics().success_prob;
    add(w.move(c, a), p);
    add(c, 1.0 - p);
    return out;
  }

  const auto& q = m.quadruples().at(*fired);
  Label base = label(w, c);
  for (const auto& p : q.affected) base.erase(p);
  for (const auto& o : q.dist) {
    Label next = base;
    next.insert(o.assignment.begin(), o.assignment.end());
    auto cell = cell_of(w, next);
    if (!cell) {
      std::string text;
      for (const auto& p : next) text += (text.empty() ? "" : ", ") + p.name();
      throw InvalidPostState("quadruple " + std::to_string(*fired) + " yields {" + text + "}, which is not a cell label");
    }
    add(*cell, o.probability);
  }
  return out;
}

Cell apply_transition(const Rdp& m, Cell c, Action a, std::optional<std::size_t> fired, double u) {
  auto dist = successor_distribution(m, c, a, fired);
  double cum = 0.0;
  for (const auto& [cell, p] : dist) {
    cum += p;
    if (u < cum) return cell;
  }
  return dist.back().first;
}

}  // namespace rdpkit
