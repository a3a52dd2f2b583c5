#pragma once

// Small models shared by the unit and acceptance tests, plus a brute-force
// trace-return oracle.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gen.hpp"
#include "rdpkit/logic.hpp"
#include "rdpkit/product.hpp"
#include "rdpkit/rdp.hpp"

namespace models {

using namespace rdpkit;

/// 3x3 world, start top-left, terminal top-right. Going east from s23 reaches
/// s33 surely if the agent came from s13, and with probability 0.1 otherwise.
inline ModelSpec history_example() {
  ModelSpec m;
  m.width = 3;
  m.height = 3;
  m.terminals = {{3, 1}};
  const std::vector<std::string> affected{"x_is2", "x_is3"};
  m.quadruples.push_back({"<true*; x_is1 & y_is3; x_is2 & y_is3>end", "e", affected, {{{"x_is3"}, 1.0}}});
  m.quadruples.push_back(
      {"<true*; !x_is1 | !y_is3; x_is2 & y_is3>end", "e", affected, {{{"x_is3"}, 0.1}, {{"x_is2"}, 0.9}}});
  return m;
}

/// 1xW corridor, start left, terminal right, `reward` on entering the terminal.
inline ModelSpec corridor(int width, double reward, double step_cost) {
  ModelSpec m;
  m.width = width;
  m.height = 1;
  m.terminals = {{width, 1}};
  m.step_cost = step_cost;
  m.rewards.push_back({"<true*; x_is" + std::to_string(width) + " & y_is1>end", reward, "every"});
  return m;
}

inline std::shared_ptr<const CompiledModel> compiled(const ModelSpec& spec, std::vector<Formula> safety = {}) {
  return std::make_shared<const CompiledModel>(build_rdp(spec), std::move(safety));
}

inline std::vector<Prop> grid_props(int w, int h) {
  std::vector<Prop> out;
  for (int x = 1; x <= w; ++x) out.emplace_back("x_is" + std::to_string(x));
  for (int y = 1; y <= h; ++y) out.emplace_back("y_is" + std::to_string(y));
  return out;
}

// Random grid model: random reward guards, and at most one quadruple on 'e'
// whose guard also requires the agent to stand in one of its affected columns.
inline Rdp random_model(gen::Rng& rng) {
  const int w = 2 + gen::pick(rng, 3);
  const int h = 1 + gen::pick(rng, 3);
  GridWorld world(w, h, {1, 1}, {{w, h}});
  const auto ps = grid_props(w, h);

  std::vector<RewardRule> rewards;
  const int nr = 1 + gen::pick(rng, 2);
  for (int i = 0; i < nr; ++i) {
    const double values[] = {-1.0, 5.0, 10.0};
    rewards.push_back({gen::formula(rng, ps, 1 + gen::pick(rng, 2)), values[gen::pick(rng, 3)],
                       gen::pick(rng, 2) ? RewardMode::Once : RewardMode::Every});
  }

  std::vector<TransitionQuadruple> quads;
  if (gen::pick(rng, 2)) {
    const int k = 1 + gen::pick(rng, w - 1);
    const Prop a("x_is" + std::to_string(k));
    const Prop b("x_is" + std::to_string(k + 1));
    Formula here = parse_ldlf("<true*; " + a.name() + " | " + b.name() + ">end");
    Formula guard = Formula::conj(gen::formula(rng, ps, 1), here);
    const double p = 0.25 * (1 + gen::pick(rng, 3));
    quads.push_back({guard, Action::East, {a, b}, {{{b}, p}, {{a}, 1.0 - p}}});
  }
  const double success[] = {1.0, 0.8};
  return Rdp(world, quads, rewards, Dynamics{success[gen::pick(rng, 2)]}, gen::pick(rng, 2) ? -1.0 : 0.0);
}

/// Follows deterministic transitions of `m` from its initial state.
inline int walk(const ExtendedMdp& m, const std::vector<Action>& actions) {
  int s = m.initial;
  for (Action a : actions) {
    const auto& out = m.out(s, a);
    if (out.size() != 1) throw std::logic_error("walk: transition is not deterministic");
    s = out.front().next;
  }
  return s;
}

inline double prob_to(const ExtendedMdp& m, int s, Action a, Cell target) {
  double p = 0.0;
  for (const auto& t : m.out(s, a))
    if (m.states[static_cast<std::size_t>(t.next)].base == target) p += t.prob;
  return p;
}

/// Replays one random episode through a MonitoredEnv and through `mdp` with
/// the same draws. Returns false on the first disagreement in state or reward.
template <class Rng>
bool replay_agrees(std::shared_ptr<const CompiledModel> model, const ExtendedMdp& mdp, ActionFilter filter,
                   int max_steps, Rng& rng) {
  MonitoredEnv env(model, 0, max_steps, filter);
  env.reset();
  int s = mdp.initial;
  if (mdp.states[static_cast<std::size_t>(s)] != env.state()) return false;
  while (!env.done()) {
    const auto allowed = env.allowed_actions();
    const Action a = allowed[rng() % allowed.size()];
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const StepResult r = env.step_with_draw(a, u);

    const auto& out = mdp.out(s, a);
    if (out.empty()) return false;
    const MdpTransition* pick = &out.back();
    double cum = 0.0;
    for (const auto& t : out) {
      cum += t.prob;
      if (u < cum) {
        pick = &t;
        break;
      }
    }
    s = pick->next;
    if (mdp.states[static_cast<std::size_t>(s)] != r.state || pick->reward != r.reward) return false;
  }
  return true;
}

/// Return of a cell path read straight off the formulas: step k pays every
/// rule whose guard holds on the first k+1 labels (once-mode rules only the
/// first time) plus the step cost.
inline double oracle_return(const Rdp& rdp, const std::vector<Cell>& cells, double gamma) {
  Trace h{label(rdp.world(), cells.front())};
  std::vector<bool> paid(rdp.rewards().size(), false);
  double g = 0.0;
  double discount = 1.0;
  for (std::size_t k = 1; k < cells.size(); ++k) {
    h.push_back(label(rdp.world(), cells[k]));
    double r = rdp.step_cost();
    for (std::size_t i = 0; i < rdp.rewards().size(); ++i) {
      const auto& rule = rdp.rewards()[i];
      if (rule.mode == RewardMode::Once && paid[i]) continue;
      if (eval_trace(rule.guard, h)) {
        r += rule.reward;
        paid[i] = true;
      }
    }
    g += discount * r;
    discount *= gamma;
  }
  return g;
}

}  // namespace models
