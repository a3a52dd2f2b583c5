#include <algorithm>

#include "rdpkit/solve.hpp"

namespace rdpkit {

ShapingPotential::ShapingPotential(std::shared_ptr<const CompiledModel> model) : model_(std::move(model)) {
  for (std::size_t i = 0; i < model_->num_rewards(); ++i) {
    const auto& a = model_->analysis(model_->reward_monitor(i));
    const int d = a.max_finite_distance();
    const double r = model_->rdp().rewards()[i].reward;
    clip_.push_back(d);
    kappa_.push_back(r > 0.0 ? r / (d + 1) : 0.0);
  }
}

double ShapingPotential::operator()(const ExtendedState& s) const {
  if (model_->is_terminal(s)) return 0.0;
  double phi = 0.0;
  for (std::size_t i = 0; i < kappa_.size(); ++i) {
    if (kappa_[i] == 0.0) continue;
    const int bit = model_->once_bit(i);
    if (bit >= 0 && (s.fired >> bit) & 1U) continue;
    const std::size_t m = model_->reward_monitor(i);
    const int d = model_->analysis(m).distance[static_cast<std::size_t>(s.monitors[m])];
    phi -= kappa_[i] * std::min(d, clip_[i]);
  }
  return phi;
}

ShapedEnv::ShapedEnv(std::unique_ptr<EpisodicEnv> inner, ShapingPotential phi, double gamma)
    : inner_(std::move(inner)), phi_(std::move(phi)), gamma_(gamma) {}

StepResult ShapedEnv::step(Action a) {
  const double before = phi_(inner_->state());
  StepResult r = inner_->step(a);
  r.reward += gamma_ * phi_(r.state) - before;
  return r;
}

ExtendedMdp shape_mdp(const ExtendedMdp& m, const ShapingPotential& phi, double gamma) {
  ExtendedMdp out = m;
  for (std::size_t s = 0; s < out.size(); ++s) {
    const double here = phi(out.states[s]);
    for (auto& list : out.transitions[s])
      for (auto& t : list) t.reward += gamma * phi(out.states[static_cast<std::size_t>(t.next)]) - here;
  }
  return out;
}

}  // namespace rdpkit
