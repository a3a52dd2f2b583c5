#include <unordered_map>

#include "rdpkit/errors.hpp"
#include "rdpkit/rng.hpp"
#include "rdpkit/solve.hpp"

namespace rdpkit {

int QTable::intern(const ExtendedState& s) {
  auto [it, fresh] = index_.emplace(s, static_cast<int>(q_.size()));
  if (fresh) {
    q_.push_back({});
    n_.push_back({});
  }
  return it->second;
}

std::optional<int> QTable::find(const ExtendedState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Action QTable::greedy(int s, const std::vector<Action>& allowed) const {
  if (allowed.empty()) throw ContractViolation("no allowed action");
  Action best = allowed.front();
  for (Action a : allowed)
    if (q(s, a) > q(s, best)) best = a;
  return best;
}

Action QTable::greedy(const ExtendedState& s, const std::vector<Action>& allowed) const {
  if (auto id = find(s)) return greedy(*id, allowed);
  if (allowed.empty()) throw ContractViolation("no allowed action");
  return allowed.front();
}

Action epsilon_greedy(const QTable& q, const ExtendedState& s, const std::vector<Action>& allowed, double epsilon,
                      std::mt19937_64& rng) {
  if (allowed.empty()) throw ContractViolation("no allowed action");
  if (uniform01(rng) < epsilon) return allowed[uniform_below(rng, allowed.size())];
  return q.greedy(s, allowed);
}

McResult mc_control(EpisodicEnv& env, const McParams& params) {
  if (params.episodes < 1) throw ContractViolation("episodes must be at least 1");
  if (!(params.epsilon >= 0.0 && params.epsilon <= 1.0)) throw ContractViolation("epsilon must lie in [0, 1]");

  std::mt19937_64 rng(params.seed);
  McResult out;
  QTable& q = out.q;

  struct Step {
    int s;
    Action a;
    double r;
  };
  std::vector<Step> episode;
  std::unordered_map<std::uint64_t, std::size_t> first;

  for (int e = 0; e < params.episodes; ++e) {
    episode.clear();
    EpisodeStats stats;
    int s = q.intern(env.reset());
    double discount = 1.0;
    while (!env.done()) {
      const auto allowed = env.allowed_actions();
      const Action a = epsilon_greedy(q, env.state(), allowed, params.epsilon, rng);
      const StepResult r = env.step(a);
      episode.push_back({s, a, r.reward});
      stats.ret += discount * r.task_reward;
      discount *= params.gamma;
      s = q.intern(r.state);
    }

    first.clear();
    for (std::size_t t = 0; t < episode.size(); ++t) {
      const auto key = static_cast<std::uint64_t>(episode[t].s) * kNumActions + static_cast<std::uint64_t>(episode[t].a);
      first.emplace(key, t);
    }
    double g = 0.0;
    for (std::size_t t = episode.size(); t-- > 0;) {
      const Step& st = episode[t];
      g = params.gamma * g + st.r;
      const auto key = static_cast<std::uint64_t>(st.s) * kNumActions + static_cast<std::uint64_t>(st.a);
      if (first.at(key) != t) continue;
      q.bump(st.s, st.a);
      if (params.update_mode == UpdateMode::Overwrite) {
        q.set(st.s, st.a, g);
      } else {
        const double old = q.q(st.s, st.a);
        q.set(st.s, st.a, old + (g - old) / q.count(st.s, st.a));
      }
    }

    stats.steps = static_cast<int>(episode.size());
    stats.distinct_states = q.size();
    stats.violations = env.violations();
    out.episodes.push_back(stats);
  }
  return out;
}

double evaluate_greedy(EpisodicEnv& env, const QTable& q, int episodes, double gamma) {
  if (episodes < 1) return 0.0;
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    env.reset();
    double discount = 1.0;
    while (!env.done()) {
      const StepResult r = env.step(q.greedy(env.state(), env.allowed_actions()));
      total += discount * r.task_reward;
      discount *= gamma;
    }
  }
  return total / episodes;
}

}  // namespace rdpkit
