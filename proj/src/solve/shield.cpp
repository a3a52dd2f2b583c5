#include "rdpkit/errors.hpp"
#include "rdpkit/solve.hpp"

namespace rdpkit {

std::vector<Action> shield_actions(const CompiledModel& model, const ExtendedState& s) {
  if (!model.has_safety()) return {kActions.begin(), kActions.end()};
  std::vector<Action> allowed;
  for (Action a : kActions) {
    bool safe = true;
    for (const auto& [cell, p] : model.successors(s, a)) {
      for (std::size_t k = 0; k < model.num_safety() && safe; ++k) {
        const std::size_t m = model.safety_monitor(k);
        safe = !model.analysis(m).is_dead(model.next(m, s.monitors[m], cell));
      }
      if (!safe) break;
    }
    if (safe) allowed.push_back(a);
  }
  if (allowed.empty()) throw EmptyShield("no safe action at " + state_name(s));
  return allowed;
}

ActionFilter make_shield(std::shared_ptr<const CompiledModel> model) {
  return [model = std::move(model)](const ExtendedState& s) { return shield_actions(*model, s); };
}

}  // namespace rdpkit
