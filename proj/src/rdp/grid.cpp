#include "rdpkit/errors.hpp"
#include "rdpkit/rdp.hpp"

namespace rdpkit {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::North: return "n";
    case Action::East: return "e";
    case Action::South: return "s";
    case Action::West: return "w";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view name) {
  for (Action a : kActions)
    if (action_name(a) == name) return a;
  return std::nullopt;
}

std::string cell_name(Cell c) {
  if (c.x < 10 && c.y < 10) return "s" + std::to_string(c.x) + std::to_string(c.y);
  return "s" + std::to_string(c.x) + "_" + std::to_string(c.y);
}

GridWorld::GridWorld(int width, int height, Cell start, std::set<Cell> terminals)
    : width_(width), height_(height), start_(start), terminals_(std::move(terminals)) {
  if (width < 1 || height < 1) throw OutOfBounds("grid dimensions must be positive");
  if (!in_bounds(start_)) throw OutOfBounds("start cell " + cell_name(start_) + " outside the grid");
  for (Cell t : terminals_)
    if (!in_bounds(t)) throw OutOfBounds("terminal cell " + cell_name(t) + " outside the grid");
}

bool GridWorld::in_bounds(Cell c) const noexcept {
  return c.x >= 1 && c.x <= width_ && c.y >= 1 && c.y <= height_;
}

std::size_t GridWorld::index(Cell c) const {
  if (!in_bounds(c)) throw OutOfBounds("cell " + cell_name(c) + " outside the grid");
  return static_cast<std::size_t>(c.y - 1) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x - 1);
}

Cell GridWorld::cell_at(std::size_t i) const {
  if (i >= num_cells()) throw OutOfBounds("cell index out of range");
  const auto w = static_cast<std::size_t>(width_);
  return Cell{static_cast<int>(i % w) + 1, static_cast<int>(i / w) + 1};
}

std::set<Prop> GridWorld::props() const {
  std::set<Prop> out;
  for (int i = 1; i <= width_; ++i) out.insert(Prop("x_is" + std::to_string(i)));
  for (int j = 1; j <= height_; ++j) out.insert(Prop("y_is" + std::to_string(j)));
  return out;
}

Cell GridWorld::move(Cell c, Action a) const {
  Cell n = c;
  switch (a) {
    case Action::North: --n.y; break;
    case Action::East: ++n.x; break;
    case Action::South: ++n.y; break;
    case Action::West: --n.x; break;
  }
  return in_bounds(n) ? n : c;
}

Label label(const GridWorld& w, Cell c) {
  if (!w.in_bounds(c)) throw OutOfBounds("cell " + cell_name(c) + " outside the grid");
  return {Prop("x_is" + std::to_string(c.x)), Prop("y_is" + std::to_string(c.y))};
}

std::optional<Cell> cell_of(const GridWorld& w, const Label& l) {
  std::optional<int> x, y;
  for (const auto& p : l) {
    const std::string& n = p.name();
    if (n.size() <= 4 || n[1] != '_' || n.compare(2, 2, "is") != 0) return std::nullopt;
    int v = 0;
    for (std::size_t i = 4; i < n.size(); ++i) {
      if (n[i] < '0' || n[i] > '9' || v > 100000) return std::nullopt;
      v = v * 10 + (n[i] - '0');
    }
    if (n[0] == 'x') {
      if (x) return std::nullopt;
      x = v;
    } else if (n[0] == 'y') {
      if (y) return std::nullopt;
      y = v;
    } else {
      return std::nullopt;
    }
  }
  if (!x || !y) return std::nullopt;
  Cell c{*x, *y};
  if (!w.in_bounds(c) || label(w, c) != l) return std::nullopt;
  return c;
}

}  // namespace rdpkit
