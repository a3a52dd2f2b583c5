#include <deque>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "rdpkit/errors.hpp"
#include "rdpkit/product.hpp"

namespace rdpkit {

int ExtendedMdp::find(const ExtendedState& s) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == s) return static_cast<int>(i);
  return -1;
}

ExtendedMdp compile_offline(const CompiledModel& model, const OfflineOptions& options) {
  ExtendedMdp m;
  std::unordered_map<ExtendedState, int, ExtendedStateHash> index;
  auto intern = [&](const ExtendedState& s) {
    auto [it, fresh] = index.emplace(s, static_cast<int>(m.states.size()));
    if (fresh) {
      if (m.states.size() >= options.max_states)
        throw ResourceLimit("extended MDP exceeded " + std::to_string(options.max_states) + " states");
      m.states.push_back(s);
      m.terminal.push_back(model.is_terminal(s));
      m.transitions.emplace_back();
    }
    return it->second;
  };

  m.initial = intern(model.initial_state());
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    if (m.terminal[i]) continue;
    const ExtendedState s = m.states[i];
    std::vector<Action> actions(kActions.begin(), kActions.end());
    if (options.allowed) actions = options.allowed(s);
    for (Action a : actions) {
      std::vector<MdpTransition> out;
      for (const auto& [cell, p] : model.successors(s, a)) {
        auto adv = model.advance(s, cell);
        out.push_back({intern(adv.next), p, adv.reward});
      }
      m.transitions[i][static_cast<std::size_t>(a)] = std::move(out);
    }
  }
  return m;
}

std::string state_name(const ExtendedState& s) {
  std::string out = "(";
  for (std::size_t k = 0; k < s.monitors.size(); ++k) out += (k ? "," : "") + std::string("q") + std::to_string(s.monitors[k]);
  out += ") ";
  if (s.fired) out += "f" + std::to_string(s.fired) + " ";
  return out + cell_name(s.base);
}

std::string to_dot(const ExtendedMdp& m, const std::string& name) {
  std::ostringstream os;
  os.precision(6);
  os << "digraph \"" << name << "\" {\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << "  n" << i << " [label=\"" << state_name(m.states[i]) << "\"";
    if (m.terminal[i]) os << ", shape=doublecircle";
    if (static_cast<int>(i) == m.initial) os << ", style=bold";
    os << "];\n";
  }
  for (std::size_t i = 0; i < m.size(); ++i)
    for (Action a : kActions)
      for (const auto& t : m.transitions[i][static_cast<std::size_t>(a)])
        os << "  n" << i << " -> n" << t.next << " [label=\"" << action_name(a) << " " << t.prob << " / " << t.reward
           << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const ExtendedMdp& m) {
  nlohmann::ordered_json j;
  j["initial"] = m.initial;
  auto states = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& s = m.states[i];
    nlohmann::ordered_json js;
    js["id"] = i;
    js["monitors"] = s.monitors;
    js["fired"] = s.fired;
    js["cell"] = {s.base.x, s.base.y};
    js["terminal"] = static_cast<bool>(m.terminal[i]);
    nlohmann::ordered_json acts = nlohmann::ordered_json::object();
    for (Action a : kActions) {
      const auto& out = m.transitions[i][static_cast<std::size_t>(a)];
      if (out.empty()) continue;
      auto arr = nlohmann::ordered_json::array();
      for (const auto& t : out) arr.push_back({{"to", t.next}, {"p", t.prob}, {"r", t.reward}});
      acts[std::string(action_name(a))] = arr;
    }
    js["actions"] = acts;
    states.push_back(js);
  }
  j["states"] = states;
  return j.dump(2);
}

}  // namespace rdpkit
