#pragma once

// Hand-rolled generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "rdpkit/logic.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

inline rdpkit::BoolExpr boolexpr(Rng& rng, const std::vector<rdpkit::Prop>& props, int depth) {
  using rdpkit::BoolExpr;
  int k = depth <= 0 ? pick(rng, 3) : pick(rng, 7);
  switch (k) {
    case 0: return BoolExpr::truth();
    case 1:
    case 2:
      if (props.empty()) return pick(rng, 2) ? BoolExpr::truth() : BoolExpr::falsity();
      return BoolExpr::atom(props[static_cast<std::size_t>(pick(rng, static_cast<int>(props.size())))]);
    case 3: return BoolExpr::negate(boolexpr(rng, props, depth - 1));
    case 4: return BoolExpr::conj(boolexpr(rng, props, depth - 1), boolexpr(rng, props, depth - 1));
    case 5: return BoolExpr::disj(boolexpr(rng, props, depth - 1), boolexpr(rng, props, depth - 1));
    default: return BoolExpr::falsity();
  }
}

rdpkit::Formula formula(Rng& rng, const std::vector<rdpkit::Prop>& props, int depth);

inline rdpkit::PathExpr path(Rng& rng, const std::vector<rdpkit::Prop>& props, int depth) {
  using rdpkit::PathExpr;
  int k = depth <= 0 ? 0 : pick(rng, 8);
  switch (k) {
    case 1: return PathExpr::test(formula(rng, props, depth - 1));
    case 2: return PathExpr::alt(path(rng, props, depth - 1), path(rng, props, depth - 1));
    case 3:
    case 4: return PathExpr::concat(path(rng, props, depth - 1), path(rng, props, depth - 1));
    case 5:
    case 6: return PathExpr::star(path(rng, props, depth - 1));
    default: return PathExpr::step(boolexpr(rng, props, depth <= 0 ? 0 : 1));
  }
}

inline rdpkit::Formula formula(Rng& rng, const std::vector<rdpkit::Prop>& props, int depth) {
  using rdpkit::Formula;
  using rdpkit::PathExpr;
  if (depth <= 0) {
    switch (pick(rng, 6)) {
      case 0: return Formula::tt();
      case 1: return Formula::ff();
      case 2: return Formula::end();
      case 3:
      case 4: return Formula::diamond(PathExpr::step(boolexpr(rng, props, 1)), Formula::tt());
      default: return Formula::box(PathExpr::step(boolexpr(rng, props, 1)), Formula::ff());
    }
  }
  switch (pick(rng, 10)) {
    case 0: return Formula::negate(formula(rng, props, depth - 1));
    case 1: return Formula::conj(formula(rng, props, depth - 1), formula(rng, props, depth - 1));
    case 2: return Formula::disj(formula(rng, props, depth - 1), formula(rng, props, depth - 1));
    case 3:
    case 4:
    case 5:
    case 6: return Formula::diamond(path(rng, props, depth - 1), formula(rng, props, depth - 1));
    default: return Formula::box(path(rng, props, depth - 1), formula(rng, props, depth - 1));
  }
}

inline std::vector<rdpkit::Prop> props(int n) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f"};
  return {names, names + n};
}

/// Every label over `ps`, in subset-bitmask order.
inline std::vector<rdpkit::Label> all_labels(const std::vector<rdpkit::Prop>& ps) {
  std::vector<rdpkit::Label> out;
  for (std::size_t m = 0; m < (std::size_t{1} << ps.size()); ++m) {
    rdpkit::Label l;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if ((m >> i) & 1U) l.insert(ps[i]);
    out.push_back(std::move(l));
  }
  return out;
}

/// Calls fn on every trace of length 0..max_len over the given labels.
template <class Fn>
void for_each_trace(const std::vector<rdpkit::Label>& labels, std::size_t max_len, Fn&& fn) {
  rdpkit::Trace h;
  auto rec = [&](auto&& self) -> void {
    fn(static_cast<const rdpkit::Trace&>(h));
    if (h.size() == max_len) return;
    for (const auto& l : labels) {
      h.push_back(l);
      self(self);
      h.pop_back();
    }
  };
  rec(rec);
}

}  // namespace gen
