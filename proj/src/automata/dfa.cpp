#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rdpkit/automata.hpp"

namespace rdpkit {

Dfa::Dfa(std::vector<Prop> props, StateId initial, std::vector<bool> accepting,
         std::vector<std::vector<DfaEdge>> edges)
    : props_(std::move(props)), initial_(initial), accepting_(std::move(accepting)), edges_(std::move(edges)) {
  const auto n = static_cast<StateId>(accepting_.size());
  if (n == 0) throw std::invalid_argument("Dfa: no states");
  if (edges_.size() != accepting_.size()) throw std::invalid_argument("Dfa: edge table size mismatch");
  if (initial_ < 0 || initial_ >= n) throw std::invalid_argument("Dfa: initial state out of range");
  for (const auto& out : edges_)
    for (const auto& e : out)
      if (e.target < 0 || e.target >= n) throw std::invalid_argument("Dfa: edge target out of range");
}

StateId dfa_step(const Dfa& d, StateId q, const Label& label) {
  for (const auto& e : d.edges(q))
    if (e.guard.eval(label)) return e.target;
  throw std::logic_error("Dfa: no edge matches label (automaton is not complete)");
}

bool dfa_accepts(const Dfa& d, const Trace& h) {
  StateId q = d.initial();
  for (const auto& label : h) q = dfa_step(d, q, label);
  return d.is_accepting(q);
}

int DfaAnalysis::max_finite_distance() const {
  int best = 0;
  for (int v : distance)
    if (v != kUnreachable) best = std::max(best, v);
  return best;
}

DfaAnalysis analyze(const Dfa& d) {
  const std::size_t n = d.num_states();
  std::vector<std::vector<StateId>> preds(n);
  for (std::size_t q = 0; q < n; ++q)
    for (const auto& e : d.edges(static_cast<StateId>(q))) preds[static_cast<std::size_t>(e.target)].push_back(static_cast<StateId>(q));

  DfaAnalysis a;
  a.distance.assign(n, kUnreachable);
  std::deque<StateId> queue;
  for (std::size_t q = 0; q < n; ++q) {
    if (d.is_accepting(static_cast<StateId>(q))) {
      a.distance[q] = 0;
      queue.push_back(static_cast<StateId>(q));
    }
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId p : preds[static_cast<std::size_t>(q)]) {
      auto& dp = a.distance[static_cast<std::size_t>(p)];
      if (dp == kUnreachable) {
        dp = a.distance[static_cast<std::size_t>(q)] + 1;
        queue.push_back(p);
      }
    }
  }
  for (std::size_t q = 0; q < n; ++q)
    if (a.distance[q] == kUnreachable) a.dead.insert(static_cast<StateId>(q));
  return a;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Dfa& d, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n";
  os << "  rankdir=LR;\n";
  for (std::size_t q = 0; q < d.num_states(); ++q) {
    const auto id = static_cast<StateId>(q);
    os << "  q" << q << " [shape=" << (d.is_accepting(id) ? "doublecircle" : "circle");
    if (id == d.initial()) os << ", style=bold, xlabel=\"init\"";
    os << "];\n";
  }
  for (std::size_t q = 0; q < d.num_states(); ++q)
    for (const auto& e : d.edges(static_cast<StateId>(q)))
      os << "  q" << q << " -> q" << e.target << " [label=\"" << dot_escape(print_bool(e.guard)) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const Dfa& d) {
  nlohmann::ordered_json j;
  auto props = nlohmann::ordered_json::array();
  for (const auto& p : d.props()) props.push_back(p.name());
  j["props"] = props;
  j["states"] = d.num_states();
  j["initial"] = d.initial();
  auto acc = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < d.num_states(); ++q)
    if (d.is_accepting(static_cast<StateId>(q))) acc.push_back(q);
  j["accepting"] = acc;
  auto edges = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < d.num_states(); ++q)
    for (const auto& e : d.edges(static_cast<StateId>(q)))
      edges.push_back({{"from", q}, {"guard", print_bool(e.guard)}, {"to", e.target}});
  j["edges"] = edges;
  return j.dump(2);
}

}  // namespace rdpkit
