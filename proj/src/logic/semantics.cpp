#include <vector>

#include "rdpkit/logic.hpp"

namespace rdpkit {

namespace {

using Positions = std::vector<bool>;  // indexed 0..n

bool holds(const Formula& f, const Trace& h, std::size_t i);

// Positions reachable from i by one match of p.
Positions reach(const PathExpr& p, const Trace& h, std::size_t i) {
  const std::size_t n = h.size();
  Positions out(n + 1, false);
  switch (p.kind()) {
    case PathExpr::Kind::Step:
      if (i < n && p.step_expr().eval(h[i])) out[i + 1] = true;
      break;
    case PathExpr::Kind::Test:
      if (holds(p.test_formula(), h, i)) out[i] = true;
      break;
    case PathExpr::Kind::Union: {
      auto a = reach(p.lhs(), h, i);
      auto b = reach(p.rhs(), h, i);
      for (std::size_t j = 0; j <= n; ++j) out[j] = a[j] || b[j];
      break;
    }
    case PathExpr::Kind::Concat: {
      auto mid = reach(p.lhs(), h, i);
      for (std::size_t j = 0; j <= n; ++j) {
        if (!mid[j]) continue;
        auto tail = reach(p.rhs(), h, j);
        for (std::size_t k = 0; k <= n; ++k) out[k] = out[k] || tail[k];
      }
      break;
    }
    case PathExpr::Kind::Star: {
      // Reflexive-transitive closure; terminates because positions are finite.
      out[i] = true;
      std::vector<std::size_t> frontier{i};
      while (!frontier.empty()) {
        std::size_t j = frontier.back();
        frontier.pop_back();
        auto next = reach(p.operand(), h, j);
        for (std::size_t k = 0; k <= n; ++k) {
          if (next[k] && !out[k]) {
            out[k] = true;
            frontier.push_back(k);
          }
        }
      }
      break;
    }
  }
  return out;
}

bool holds(const Formula& f, const Trace& h, std::size_t i) {
  switch (f.kind()) {
    case Formula::Kind::TT: return true;
    case Formula::Kind::Not: return !holds(f.operand(), h, i);
    case Formula::Kind::And: return holds(f.lhs(), h, i) && holds(f.rhs(), h, i);
    case Formula::Kind::Or: return holds(f.lhs(), h, i) || holds(f.rhs(), h, i);
    case Formula::Kind::Diamond: {
      auto r = reach(f.path(), h, i);
      for (std::size_t j = 0; j < r.size(); ++j)
        if (r[j] && holds(f.operand(), h, j)) return true;
      return false;
    }
    case Formula::Kind::Box: {
      auto r = reach(f.path(), h, i);
      for (std::size_t j = 0; j < r.size(); ++j)
        if (r[j] && !holds(f.operand(), h, j)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

bool eval_trace(const Formula& f, const Trace& h) { return holds(f, h, 0); }

}  // namespace rdpkit
