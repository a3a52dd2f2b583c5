#include "rdpkit/errors.hpp"
#include "rdpkit/product.hpp"

namespace rdpkit {

std::size_t ExtendedStateHash::operator()(const ExtendedState& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) { h = (h ^ v) * 0x100000001b3ULL; };
  for (StateId q : s.monitors) mix(static_cast<std::uint64_t>(q));
  mix(s.fired);
  mix(static_cast<std::uint64_t>(s.base.x) << 32 | static_cast<std::uint32_t>(s.base.y));
  return h;
}

CompiledModel::CompiledModel(Rdp rdp, std::vector<Formula> safety, const CompileOptions& options)
    : rdp_(std::move(rdp)), safety_(std::move(safety)) {
  const auto& props = rdp_.props();
  for (std::size_t k = 0; k < safety_.size(); ++k)
    for (const auto& p : safety_[k].props())
      if (!props.contains(p)) throw ConfigError("options.shield[" + std::to_string(k) + "]", "unknown proposition '" + p.name() + "'");

  for (const auto& r : rdp_.rewards()) dfas_.push_back(compile(r.guard, props, options));
  for (const auto& q : rdp_.quadruples()) {
    dfas_.push_back(compile(q.guard, props, options));
    quad_dfas_.push_back(dfas_.back());
  }
  for (const auto& f : safety_) dfas_.push_back(compile(f, props, options));
  for (const auto& d : dfas_) analyses_.push_back(analyze(d));

  int bits = 0;
  for (const auto& r : rdp_.rewards()) {
    if (r.mode == RewardMode::Once) {
      if (bits == 32) throw ConfigError("rewards", "at most 32 once-mode reward rules are supported");
      once_bit_.push_back(bits++);
    } else {
      once_bit_.push_back(-1);
    }
  }

  const GridWorld& w = world();
  const std::size_t cells = w.num_cells();
  std::vector<Label> labels;
  for (std::size_t c = 0; c < cells; ++c) labels.push_back(label(w, w.cell_at(c)));
  for (const auto& d : dfas_) {
    std::vector<StateId> table(d.num_states() * cells);
    for (std::size_t q = 0; q < d.num_states(); ++q)
      for (std::size_t c = 0; c < cells; ++c) table[q * cells + c] = dfa_step(d, static_cast<StateId>(q), labels[c]);
    next_.push_back(std::move(table));
  }
}

StateId CompiledModel::next(std::size_t k, StateId q, Cell cell) const {
  return next_[k][static_cast<std::size_t>(q) * world().num_cells() + world().index(cell)];
}

ExtendedState CompiledModel::initial_state() const {
  ExtendedState s;
  s.base = world().start();
  for (std::size_t k = 0; k < dfas_.size(); ++k) s.monitors.push_back(next(k, dfas_[k].initial(), s.base));
  return s;
}

bool CompiledModel::violates_safety(const ExtendedState& s) const {
  for (std::size_t k = 0; k < safety_.size(); ++k) {
    const std::size_t m = safety_monitor(k);
    if (analyses_[m].is_dead(s.monitors[m])) return true;
  }
  return false;
}

std::optional<std::size_t> CompiledModel::match(const ExtendedState& s, Action a) const {
  std::vector<StateId> qs(s.monitors.begin() + static_cast<std::ptrdiff_t>(num_rewards()),
                          s.monitors.begin() + static_cast<std::ptrdiff_t>(num_rewards() + num_quadruples()));
  return match_quadruple(rdp_, quad_dfas_, qs, a);
}

std::vector<std::pair<Cell, double>> CompiledModel::successors(const ExtendedState& s, Action a) const {
  return successor_distribution(rdp_, s.base, a, match(s, a));
}

CompiledModel::Advance CompiledModel::advance(const ExtendedState& s, Cell cell) const {
  Advance r{s, rdp_.step_cost()};
  r.next.base = cell;
  for (std::size_t k = 0; k < dfas_.size(); ++k) r.next.monitors[k] = next(k, s.monitors[k], cell);
  const auto& rules = rdp_.rewards();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!dfas_[i].is_accepting(r.next.monitors[i])) continue;
    if (once_bit_[i] >= 0) {
      const std::uint32_t bit = std::uint32_t{1} << once_bit_[i];
      if (r.next.fired & bit) continue;
      r.next.fired |= bit;
    }
    r.reward += rules[i].reward;
  }
  return r;
}

}  // namespace rdpkit
