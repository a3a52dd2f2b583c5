#include <algorithm>

#include "rdpkit/errors.hpp"
#include "rdpkit/product.hpp"
#include "rdpkit/rng.hpp"

namespace rdpkit {

MonitoredEnv::MonitoredEnv(std::shared_ptr<const CompiledModel> model, std::uint64_t seed, int n_step_limit,
                           ActionFilter filter)
    : model_(std::move(model)), rng_(seed), limit_(n_step_limit), filter_(std::move(filter)) {}

const ExtendedState& MonitoredEnv::reset() {
  state_ = model_->initial_state();
  steps_ = 0;
  violations_ = 0;
  done_ = model_->is_terminal(state_);
  return state_;
}

std::vector<Action> MonitoredEnv::allowed_actions() const {
  if (filter_) return filter_(state_);
  return {kActions.begin(), kActions.end()};
}

StepResult MonitoredEnv::step(Action a) { return step_with_draw(a, uniform01(rng_)); }

StepResult MonitoredEnv::step_with_draw(Action a, double u) {
  if (done_) throw ContractViolation("step called on a finished episode");
  if (filter_) {
    auto allowed = filter_(state_);
    if (std::find(allowed.begin(), allowed.end(), a) == allowed.end())
      throw ContractViolation("action '" + std::string(action_name(a)) + "' is not allowed here");
  }
  auto dist = model_->successors(state_, a);
  Cell cell = dist.back().first;
  double cum = 0.0;
  for (const auto& [c, p] : dist) {
    cum += p;
    if (u < cum) {
      cell = c;
      break;
    }
  }
  auto adv = model_->advance(state_, cell);
  const bool was_safe = !model_->violates_safety(state_);
  state_ = std::move(adv.next);
  ++steps_;
  if (was_safe && model_->violates_safety(state_)) ++violations_;
  done_ = model_->is_terminal(state_) || (limit_ > 0 && steps_ >= limit_);
  return {state_, adv.reward, adv.reward, done_};
}

}  // namespace rdpkit
