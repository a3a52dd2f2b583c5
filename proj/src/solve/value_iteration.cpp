#include <algorithm>
#include <cmath>

#include "rdpkit/errors.hpp"
#include "rdpkit/solve.hpp"

namespace rdpkit {

namespace {

// Bellman backup of one state; nullopt when no action has transitions.
std::optional<double> backup(const ExtendedMdp& m, const std::vector<double>& v, std::size_t s, double gamma) {
  std::optional<double> best;
  for (Action a : kActions) {
    auto q = q_value(m, v, static_cast<int>(s), a, gamma);
    if (q && (!best || *q > *best)) best = q;
  }
  return best;
}

ValueTable extract(const ExtendedMdp& m, std::vector<double> v, double gamma, int iterations) {
  ValueTable t;
  t.policy.assign(m.size(), std::nullopt);
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.terminal[s]) continue;
    std::array<std::optional<double>, kNumActions> qs;
    std::optional<double> best;
    for (Action a : kActions) {
      qs[static_cast<std::size_t>(a)] = q_value(m, v, static_cast<int>(s), a, gamma);
      const auto& q = qs[static_cast<std::size_t>(a)];
      if (q && (!best || *q > *best)) best = q;
    }
    if (!best) continue;
    const double slack = kTieTolerance * std::max(1.0, std::abs(*best));
    for (Action a : kActions) {
      const auto& q = qs[static_cast<std::size_t>(a)];
      if (q && *q >= *best - slack) {
        t.policy[s] = a;
        break;
      }
    }
  }
  t.v = std::move(v);
  t.iterations = iterations;
  return t;
}

template <bool Parallel>
ValueTable solve(const ExtendedMdp& m, double gamma, double tol, int max_iters) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ContractViolation("gamma must lie in [0, 1]");
  if (!(tol > 0.0)) throw ContractViolation("tolerance must be positive");
  const auto n = static_cast<std::ptrdiff_t>(m.size());
  std::vector<double> v(m.size(), 0.0);
  std::vector<double> next(m.size(), 0.0);
  for (int it = 1; it <= max_iters; ++it) {
    double delta = 0.0;
#pragma omp parallel for if (Parallel) schedule(static) reduction(max : delta)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      double value = 0.0;
      if (!m.terminal[s]) value = backup(m, v, s, gamma).value_or(0.0);
      next[s] = value;
      delta = std::max(delta, std::abs(value - v[s]));
    }
    v.swap(next);
    if (delta <= tol) return extract(m, std::move(v), gamma, it);
  }
  throw NoConvergence(max_iters);
}

}  // namespace

std::optional<double> q_value(const ExtendedMdp& m, const std::vector<double>& v, int s, Action a, double gamma) {
  const auto& out = m.out(s, a);
  if (out.empty()) return std::nullopt;
  double q = 0.0;
  for (const auto& t : out) q += t.prob * (t.reward + gamma * v[static_cast<std::size_t>(t.next)]);
  return q;
}

ValueTable value_iteration(const ExtendedMdp& m, double gamma, double tol, int max_iters) {
  return solve<true>(m, gamma, tol, max_iters);
}

ValueTable value_iteration_serial(const ExtendedMdp& m, double gamma, double tol, int max_iters) {
  return solve<false>(m, gamma, tol, max_iters);
}

}  // namespace rdpkit
