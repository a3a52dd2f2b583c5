#include "rdpkit/errors.hpp"
#include "rdpkit/experiment.hpp"

namespace rdpkit {

namespace {

ExperimentConfig grid(std::string name, int w, int h, Cell terminal) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.model.width = w;
  c.model.height = h;
  c.model.start = {1, 1};
  c.model.terminals = {terminal};
  return c;
}

// Episodes end in the top-right cell (n, 1).
ExperimentConfig exp1(std::string_view variant, int n) {
  if (n < 3 || n > 7) throw ConfigError("size", "exp1 presets support sizes 3 to 7");
  std::string goal;
  if (variant == "adjacent") goal = "<true*; x_is2 & y_is3; true*; x_is3 & y_is3; true*>end";
  else if (variant == "center") goal = "<true*; x_is1 & y_is3; true*; x_is2 & y_is2; true*; x_is3 & y_is3; true*>end";
  else goal = "<true*; x_is3 & y_is3; true*; x_is1 & y_is1; true*>end";
  auto c = grid("exp1-" + std::string(variant) + "-" + std::to_string(n), n, n, {n, 1});
  c.model.rewards.push_back({goal, 1000.0, "once"});
  return c;
}

ExperimentConfig exp2() {
  auto c = grid("exp2", 5, 5, {5, 1});
  c.model.rewards.push_back(
      {"<true*; x_is1 & y_is5; true*; x_is3 & y_is3; true*; x_is5 & y_is5; true*>end", 1000.0, "once"});
  return c;
}

ExperimentConfig exp3() {
  auto c = grid("exp3", 3, 3, {3, 1});
  c.model.step_cost = -1.0;
  c.model.rewards.push_back({"<true*; x_is1 & y_is3; true*>end", 50.0, "once"});
  c.shield = {"[true*]<(!x_is1 | !y_is2)*>end"};
  return c;
}

ExperimentConfig exp4(bool regular) {
  auto c = grid(regular ? "exp4-regular" : "exp4-plain", 5, 2, {5, 1});
  c.model.success_prob = 0.8;
  c.model.step_cost = -1.0;
  c.model.rewards.push_back({"<true*; x_is3 & y_is1; true*>end", 10.0, "once"});
  const std::vector<std::string> affected{"x_is3", "x_is4"};
  const OutcomeSpec move{{"x_is4"}, 0.8};
  const OutcomeSpec stay{{"x_is3"}, 0.2};
  if (!regular) {
    c.model.quadruples.push_back({"<true*; x_is3 & y_is1>end", "e", affected, {move, stay}});
  } else {
    c.model.quadruples.push_back(
        {"<true*; x_is2 & y_is1; x_is3 & y_is1>end", "e", affected, {{{"x_is4"}, 0.1}, {{"x_is3"}, 0.9}}});
    c.model.quadruples.push_back({"<true*; !x_is2 | !y_is1; x_is3 & y_is1>end", "e", affected, {move, stay}});
  }
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"exp1-adjacent", "exp1-center", "exp1-diagonal", "exp2", "exp3", "exp4-plain", "exp4-regular"};
}

ExperimentConfig preset(std::string_view name, std::optional<int> size) {
  const bool exp1_family = name.starts_with("exp1-");
  if (size && !exp1_family) throw ConfigError("size", "only the exp1 presets take a size");
  if (name == "exp1-adjacent") return exp1("adjacent", size.value_or(3));
  if (name == "exp1-center") return exp1("center", size.value_or(3));
  if (name == "exp1-diagonal") return exp1("diagonal", size.value_or(3));
  if (name == "exp2") return exp2();
  if (name == "exp3") return exp3();
  if (name == "exp4-plain") return exp4(false);
  if (name == "exp4-regular") return exp4(true);
  throw UnknownPreset(std::string(name));
}

}  // namespace rdpkit
