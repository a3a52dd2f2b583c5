#include "rdpkit/errors.hpp"
#include "rdpkit/rdp.hpp"

namespace rdpkit {

namespace {

std::string idx(const char* list, std::size_t i) { return std::string(list) + "[" + std::to_string(i) + "]"; }

Formula parse_field(const std::string& text, const std::string& field) {
  try {
    return parse_ldlf(text);
  } catch (const SyntaxError& e) {
    throw ConfigError(field, e.what());
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

Prop prop_field(const std::string& name, const std::string& field) {
  if (!is_valid_prop_name(name)) throw ConfigError(field, "invalid proposition name '" + name + "'");
  return Prop(name);
}

}  // namespace

Rdp build_rdp(const ModelSpec& spec) {
  if (spec.width < 1) throw ConfigError("grid.width", "must be positive");
  if (spec.height < 1) throw ConfigError("grid.height", "must be positive");
  auto inside = [&](Cell c) { return c.x >= 1 && c.x <= spec.width && c.y >= 1 && c.y <= spec.height; };
  if (!inside(spec.start)) throw ConfigError("grid.start", "cell outside the grid");
  std::set<Cell> terminals;
  for (std::size_t i = 0; i < spec.terminals.size(); ++i) {
    if (!inside(spec.terminals[i])) throw ConfigError(idx("grid.terminals", i), "cell outside the grid");
    terminals.insert(spec.terminals[i]);
  }
  GridWorld world(spec.width, spec.height, spec.start, terminals);

  std::vector<TransitionQuadruple> quads;
  for (std::size_t i = 0; i < spec.quadruples.size(); ++i) {
    const auto& q = spec.quadruples[i];
    const std::string base = idx("quadruples", i);
    auto action = parse_action(q.action);
    if (!action) throw ConfigError(base + ".action", "unknown action '" + q.action + "' (expected n, e, s or w)");
    TransitionQuadruple t{parse_field(q.guard, base + ".guard"), *action, {}, {}};
    for (std::size_t k = 0; k < q.affected.size(); ++k) t.affected.insert(prop_field(q.affected[k], base + ".affected"));
    for (std::size_t k = 0; k < q.outcomes.size(); ++k) {
      Outcome o;
      for (const auto& name : q.outcomes[k].assignment)
        o.assignment.insert(prop_field(name, idx((base + ".outcomes").c_str(), k) + ".assignment"));
      o.probability = q.outcomes[k].probability;
      t.dist.push_back(std::move(o));
    }
    quads.push_back(std::move(t));
  }

  std::vector<RewardRule> rewards;
  for (std::size_t i = 0; i < spec.rewards.size(); ++i) {
    const auto& r = spec.rewards[i];
    const std::string base = idx("rewards", i);
    RewardMode mode;
    if (r.mode == "every") mode = RewardMode::Every;
    else if (r.mode == "once") mode = RewardMode::Once;
    else throw ConfigError(base + ".mode", "expected 'every' or 'once', got '" + r.mode + "'");
    rewards.push_back({parse_field(r.guard, base + ".guard"), r.value, mode});
  }

  return Rdp(std::move(world), std::move(quads), std::move(rewards), Dynamics{spec.success_prob}, spec.step_cost);
}

}  // namespace rdpkit
