// LDLf -> DFA.
//
// Pipeline: negation normal form over an interned closure, the LDLf
// one-step expansion (tests are epsilon moves, star loops carry F/T markers
// so an epsilon-cycle is cut off within a single step), subset construction
// over DNF-normalised obligation sets, Hopcroft minimisation, then symbolic
// guards read off a decision tree over the formula's own propositions.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "rdpkit/automata.hpp"
#include "rdpkit/errors.hpp"

namespace rdpkit {

namespace {

enum class FK : std::uint8_t { True, False, And, Or, Diamond, Box, FMark, TMark };
enum class PK : std::uint8_t { Step, Test, Union, Concat, Star };

struct FNode {
  FK kind;
  int a;  // And/Or: lhs; Diamond/Box: path; marks: wrapped formula
  int b;  // And/Or: rhs; Diamond/Box: body
};

struct PNode {
  PK kind;
  int a;  // Step: step index; Test: formula; Union/Concat: lhs; Star: operand
  int b;
};

using Clause = std::vector<int>;
using Dnf = std::vector<Clause>;

const Dnf kFalse{};
const Dnf kTrue{Clause{}};

Dnf normalize(std::vector<Clause> cs) {
  for (auto& c : cs) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(cs.begin(), cs.end(), [](const Clause& x, const Clause& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  Dnf kept;
  for (auto& c : cs) {
    bool absorbed = std::any_of(kept.begin(), kept.end(), [&](const Clause& k) {
      return std::includes(c.begin(), c.end(), k.begin(), k.end());
    });
    if (!absorbed) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

Dnf dnf_or(const Dnf& x, const Dnf& y) {
  if (x == kTrue || y == kTrue) return kTrue;
  std::vector<Clause> cs(x);
  cs.insert(cs.end(), y.begin(), y.end());
  return normalize(std::move(cs));
}

Dnf dnf_and(const Dnf& x, const Dnf& y) {
  if (x.empty() || y.empty()) return kFalse;
  if (x == kTrue) return y;
  if (y == kTrue) return x;
  std::vector<Clause> cs;
  cs.reserve(x.size() * y.size());
  for (const auto& cx : x) {
    for (const auto& cy : y) {
      Clause u;
      std::set_union(cx.begin(), cx.end(), cy.begin(), cy.end(), std::back_inserter(u));
      cs.push_back(std::move(u));
    }
  }
  return normalize(std::move(cs));
}

struct DnfHash {
  std::size_t operator()(const Dnf& d) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& c : d) {
      for (int v : c) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ULL;
      h = (h ^ 0x9e3779b97f4a7c15ULL) * 0x100000001b3ULL;
    }
    return h;
  }
};

// Three-valued evaluation under a partial assignment (-1 = unassigned).
int eval3(const BoolExpr& e, const std::map<Prop, int>& var_index, const std::vector<int>& assign) {
  switch (e.kind()) {
    case BoolExpr::Kind::True: return 1;
    case BoolExpr::Kind::False: return 0;
    case BoolExpr::Kind::Atom: return assign[static_cast<std::size_t>(var_index.at(e.prop()))];
    case BoolExpr::Kind::Not: {
      int v = eval3(e.operand(), var_index, assign);
      return v < 0 ? -1 : 1 - v;
    }
    case BoolExpr::Kind::And: {
      int l = eval3(e.lhs(), var_index, assign);
      int r = eval3(e.rhs(), var_index, assign);
      if (l == 0 || r == 0) return 0;
      if (l == 1 && r == 1) return 1;
      return -1;
    }
    case BoolExpr::Kind::Or: {
      int l = eval3(e.lhs(), var_index, assign);
      int r = eval3(e.rhs(), var_index, assign);
      if (l == 1 || r == 1) return 1;
      if (l == 0 && r == 0) return 0;
      return -1;
    }
  }
  return -1;
}

class Compiler {
 public:
  explicit Compiler(const CompileOptions& options) : options_(options) {}

  Dfa run(const Formula& f, const std::set<Prop>& props) {
    for (const auto& p : f.props())
      if (!props.contains(p)) throw UnknownProposition(p.name());

    const int root = nnf(f, false);
    build_letter_classes(f.props());
    determinize(root);
    minimize();
    return emit(props);
  }

 private:
  // ------------------------------------------------------------ closure

  int fnode(FK k, int a = -1, int b = -1) {
    if (k == FK::And) {
      if (a == false_id() || b == false_id()) return false_id();
      if (a == true_id()) return b;
      if (b == true_id() || a == b) return a;
      if (a > b) std::swap(a, b);
    } else if (k == FK::Or) {
      if (a == true_id() || b == true_id()) return true_id();
      if (a == false_id()) return b;
      if (b == false_id() || a == b) return a;
      if (a > b) std::swap(a, b);
    }
    auto key = std::make_tuple(static_cast<int>(k), a, b);
    if (auto it = fmap_.find(key); it != fmap_.end()) return it->second;
    int id = static_cast<int>(fnodes_.size());
    fnodes_.push_back({k, a, b});
    fmap_.emplace(key, id);
    return id;
  }

  int true_id() {
    if (true_id_ < 0) {
      true_id_ = static_cast<int>(fnodes_.size());
      fnodes_.push_back({FK::True, -1, -1});
    }
    return true_id_;
  }

  int false_id() {
    if (false_id_ < 0) {
      false_id_ = static_cast<int>(fnodes_.size());
      fnodes_.push_back({FK::False, -1, -1});
    }
    return false_id_;
  }

  int pnode(PK k, int a, int b = -1) {
    auto key = std::make_tuple(static_cast<int>(k), a, b);
    if (auto it = pmap_.find(key); it != pmap_.end()) return it->second;
    int id = static_cast<int>(pnodes_.size());
    pnodes_.push_back({k, a, b});
    pmap_.emplace(key, id);
    return id;
  }

  int step_index(const BoolExpr& e) {
    std::string key = print_bool(e);
    if (auto it = step_map_.find(key); it != step_map_.end()) return it->second;
    int id = static_cast<int>(steps_.size());
    steps_.push_back(e);
    step_map_.emplace(std::move(key), id);
    return id;
  }

  int nnf(const Formula& f, bool neg) {
    switch (f.kind()) {
      case Formula::Kind::TT: return neg ? false_id() : true_id();
      case Formula::Kind::Not: return nnf(f.operand(), !neg);
      case Formula::Kind::And:
        return fnode(neg ? FK::Or : FK::And, nnf(f.lhs(), neg), nnf(f.rhs(), neg));
      case Formula::Kind::Or:
        return fnode(neg ? FK::And : FK::Or, nnf(f.lhs(), neg), nnf(f.rhs(), neg));
      case Formula::Kind::Diamond:
        return fnode(neg ? FK::Box : FK::Diamond, lift(f.path()), nnf(f.operand(), neg));
      case Formula::Kind::Box:
        return fnode(neg ? FK::Diamond : FK::Box, lift(f.path()), nnf(f.operand(), neg));
    }
    return false_id();
  }

  int lift(const PathExpr& p) {
    switch (p.kind()) {
      case PathExpr::Kind::Step: return pnode(PK::Step, step_index(p.step_expr()));
      case PathExpr::Kind::Test: return pnode(PK::Test, nnf(p.test_formula(), false));
      case PathExpr::Kind::Union: return pnode(PK::Union, lift(p.lhs()), lift(p.rhs()));
      case PathExpr::Kind::Concat: return pnode(PK::Concat, lift(p.lhs()), lift(p.rhs()));
      case PathExpr::Kind::Star: return pnode(PK::Star, lift(p.operand()));
    }
    return -1;
  }

  int negate(int id) {
    if (auto it = neg_memo_.find(id); it != neg_memo_.end()) return it->second;
    const FNode n = fnodes_[static_cast<std::size_t>(id)];
    int r = -1;
    switch (n.kind) {
      case FK::True: r = false_id(); break;
      case FK::False: r = true_id(); break;
      case FK::And: r = fnode(FK::Or, negate(n.a), negate(n.b)); break;
      case FK::Or: r = fnode(FK::And, negate(n.a), negate(n.b)); break;
      case FK::Diamond: r = fnode(FK::Box, n.a, negate(n.b)); break;
      case FK::Box: r = fnode(FK::Diamond, n.a, negate(n.b)); break;
      case FK::FMark: r = fnode(FK::TMark, negate(n.a)); break;
      case FK::TMark: r = fnode(FK::FMark, negate(n.a)); break;
    }
    neg_memo_.emplace(id, r);
    return r;
  }

  // Removes F/T markers once a proposition step has been consumed.
  int strip(int id) {
    if (auto it = strip_memo_.find(id); it != strip_memo_.end()) return it->second;
    const FNode n = fnodes_[static_cast<std::size_t>(id)];
    int r = id;
    switch (n.kind) {
      case FK::True:
      case FK::False: break;
      case FK::And: r = fnode(FK::And, strip(n.a), strip(n.b)); break;
      case FK::Or: r = fnode(FK::Or, strip(n.a), strip(n.b)); break;
      case FK::Diamond: r = fnode(FK::Diamond, n.a, strip(n.b)); break;
      case FK::Box: r = fnode(FK::Box, n.a, strip(n.b)); break;
      case FK::FMark:
      case FK::TMark: r = strip(n.a); break;
    }
    strip_memo_.emplace(id, r);
    return r;
  }

  Dnf dnf_of(int id) {
    const FNode n = fnodes_[static_cast<std::size_t>(id)];
    switch (n.kind) {
      case FK::True: return kTrue;
      case FK::False: return kFalse;
      case FK::And: return dnf_and(dnf_of(n.a), dnf_of(n.b));
      case FK::Or: return dnf_or(dnf_of(n.a), dnf_of(n.b));
      default: return Dnf{Clause{id}};
    }
  }

  // ------------------------------------------------------- letter classes

  struct TreeNode {
    int var;  // -1 for a leaf
    int hi;
    int lo;
    int cls;
  };

  void build_letter_classes(const std::set<Prop>& occurring) {
    vars_.assign(occurring.begin(), occurring.end());
    std::map<Prop, int> var_index;
    for (std::size_t i = 0; i < vars_.size(); ++i) var_index.emplace(vars_[i], static_cast<int>(i));
    if (steps_.size() > 64) throw ResourceLimit("more than 64 distinct step expressions");

    std::vector<std::set<int>> step_vars(steps_.size());
    for (std::size_t s = 0; s < steps_.size(); ++s) {
      std::set<Prop> ps;
      steps_[s].collect_props(ps);
      for (const auto& p : ps) step_vars[s].insert(var_index.at(p));
    }

    std::vector<int> assign(vars_.size(), -1);
    std::unordered_map<std::uint64_t, int> mask_class;
    tree_.clear();
    class_masks_.clear();

    auto build = [&](auto&& self) -> int {
      if (tree_.size() > (1u << 22)) throw ResourceLimit("letter decision tree exceeds 4M nodes");
      std::uint64_t mask = 0;
      int split = -1;
      for (std::size_t s = 0; s < steps_.size(); ++s) {
        int v = eval3(steps_[s], var_index, assign);
        if (v == 1) {
          mask |= std::uint64_t{1} << s;
        } else if (v < 0) {
          for (int var : step_vars[s]) {
            if (assign[static_cast<std::size_t>(var)] < 0 && (split < 0 || var < split)) split = var;
          }
        }
      }
      int id = static_cast<int>(tree_.size());
      tree_.push_back({-1, -1, -1, -1});
      if (split < 0) {
        auto [it, fresh] = mask_class.emplace(mask, static_cast<int>(class_masks_.size()));
        if (fresh) class_masks_.push_back(mask);
        tree_[static_cast<std::size_t>(id)].cls = it->second;
        return id;
      }
      auto& a = assign[static_cast<std::size_t>(split)];
      a = 1;
      int hi = self(self);
      a = 0;
      int lo = self(self);
      a = -1;
      tree_[static_cast<std::size_t>(id)] = {split, hi, lo, -1};
      return id;
    };
    build(build);
  }

  // ------------------------------------------------------------ expansion

  Dnf delta(int id, int cls) {
    const std::uint64_t key = static_cast<std::uint64_t>(id) * class_masks_.size() + static_cast<std::uint64_t>(cls);
    if (auto it = delta_memo_.find(key); it != delta_memo_.end()) return it->second;
    if (!in_progress_.insert(key).second) throw std::logic_error("unguarded epsilon cycle in LDLf expansion");
    const FNode n = fnodes_[static_cast<std::size_t>(id)];
    Dnf r;
    switch (n.kind) {
      case FK::True: r = kTrue; break;
      case FK::False: r = kFalse; break;
      case FK::And: r = dnf_and(delta(n.a, cls), delta(n.b, cls)); break;
      case FK::Or: r = dnf_or(delta(n.a, cls), delta(n.b, cls)); break;
      case FK::FMark: r = kFalse; break;
      case FK::TMark: r = kTrue; break;
      case FK::Diamond: r = delta_diamond(id, n.a, n.b, cls); break;
      case FK::Box: r = delta_box(id, n.a, n.b, cls); break;
    }
    in_progress_.erase(key);
    delta_memo_.emplace(key, r);
    return r;
  }

  bool step_holds(int step, int cls) const {
    return (class_masks_[static_cast<std::size_t>(cls)] >> step) & 1U;
  }

  Dnf delta_diamond(int self, int p, int body, int cls) {
    const PNode pn = pnodes_[static_cast<std::size_t>(p)];
    switch (pn.kind) {
      case PK::Step: return step_holds(pn.a, cls) ? dnf_of(strip(body)) : kFalse;
      case PK::Test: return dnf_and(delta(pn.a, cls), delta(body, cls));
      case PK::Union:
        return dnf_or(delta(fnode(FK::Diamond, pn.a, body), cls), delta(fnode(FK::Diamond, pn.b, body), cls));
      case PK::Concat: return delta(fnode(FK::Diamond, pn.a, fnode(FK::Diamond, pn.b, body)), cls);
      case PK::Star:
        return dnf_or(delta(body, cls), delta(fnode(FK::Diamond, pn.a, fnode(FK::FMark, self)), cls));
    }
    return kFalse;
  }

  Dnf delta_box(int self, int p, int body, int cls) {
    const PNode pn = pnodes_[static_cast<std::size_t>(p)];
    switch (pn.kind) {
      case PK::Step: return step_holds(pn.a, cls) ? dnf_of(strip(body)) : kTrue;
      case PK::Test: return dnf_or(delta(negate(pn.a), cls), delta(body, cls));
      case PK::Union:
        return dnf_and(delta(fnode(FK::Box, pn.a, body), cls), delta(fnode(FK::Box, pn.b, body), cls));
      case PK::Concat: return delta(fnode(FK::Box, pn.a, fnode(FK::Box, pn.b, body)), cls);
      case PK::Star:
        return dnf_and(delta(body, cls), delta(fnode(FK::Box, pn.a, fnode(FK::TMark, self)), cls));
    }
    return kTrue;
  }

  // Expansion on the empty suffix (end of trace).
  bool delta_end(int id) {
    if (auto it = end_memo_.find(id); it != end_memo_.end()) return it->second;
    const FNode n = fnodes_[static_cast<std::size_t>(id)];
    bool r = false;
    switch (n.kind) {
      case FK::True: r = true; break;
      case FK::False: r = false; break;
      case FK::And: r = delta_end(n.a) && delta_end(n.b); break;
      case FK::Or: r = delta_end(n.a) || delta_end(n.b); break;
      case FK::FMark: r = false; break;
      case FK::TMark: r = true; break;
      case FK::Diamond: {
        const PNode pn = pnodes_[static_cast<std::size_t>(n.a)];
        switch (pn.kind) {
          case PK::Step: r = false; break;
          case PK::Test: r = delta_end(pn.a) && delta_end(n.b); break;
          case PK::Union:
            r = delta_end(fnode(FK::Diamond, pn.a, n.b)) || delta_end(fnode(FK::Diamond, pn.b, n.b));
            break;
          case PK::Concat: r = delta_end(fnode(FK::Diamond, pn.a, fnode(FK::Diamond, pn.b, n.b))); break;
          case PK::Star:
            r = delta_end(n.b) || delta_end(fnode(FK::Diamond, pn.a, fnode(FK::FMark, id)));
            break;
        }
        break;
      }
      case FK::Box: {
        const PNode pn = pnodes_[static_cast<std::size_t>(n.a)];
        switch (pn.kind) {
          case PK::Step: r = true; break;
          case PK::Test: r = delta_end(negate(pn.a)) || delta_end(n.b); break;
          case PK::Union:
            r = delta_end(fnode(FK::Box, pn.a, n.b)) && delta_end(fnode(FK::Box, pn.b, n.b));
            break;
          case PK::Concat: r = delta_end(fnode(FK::Box, pn.a, fnode(FK::Box, pn.b, n.b))); break;
          case PK::Star:
            r = delta_end(n.b) && delta_end(fnode(FK::Box, pn.a, fnode(FK::TMark, id)));
            break;
        }
        break;
      }
    }
    end_memo_.emplace(id, r);
    return r;
  }

  // --------------------------------------------------- subset construction

  void determinize(int root) {
    const std::size_t ncls = class_masks_.size();
    std::unordered_map<Dnf, int, DnfHash> index;
    std::vector<Dnf> states;
    auto intern = [&](Dnf d) {
      auto [it, fresh] = index.emplace(d, static_cast<int>(states.size()));
      if (fresh) {
        if (states.size() >= options_.max_states)
          throw ResourceLimit("DFA construction exceeded " + std::to_string(options_.max_states) + " states");
        states.push_back(std::move(d));
      }
      return it->second;
    };

    intern(dnf_of(root));
    for (std::size_t s = 0; s < states.size(); ++s) {
      std::vector<int> row(ncls);
      for (std::size_t c = 0; c < ncls; ++c) {
        Dnf next = kFalse;
        for (const auto& clause : states[s]) {
          Dnf conj = kTrue;
          for (int atom : clause) {
            conj = dnf_and(conj, delta(atom, static_cast<int>(c)));
            if (conj.empty()) break;
          }
          next = dnf_or(next, conj);
          if (next == kTrue) break;
        }
        row[c] = intern(std::move(next));
      }
      trans_.push_back(std::move(row));
    }

    accepting_.resize(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
      accepting_[s] = std::any_of(states[s].begin(), states[s].end(), [&](const Clause& c) {
        return std::all_of(c.begin(), c.end(), [&](int atom) { return delta_end(atom); });
      });
    }
  }

  // -------------------------------------------------------------- Hopcroft

  void minimize() {
    const std::size_t n = trans_.size();
    const std::size_t ncls = class_masks_.size();

    std::vector<std::vector<std::vector<int>>> inv(ncls, std::vector<std::vector<int>>(n));
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = 0; c < ncls; ++c) inv[c][static_cast<std::size_t>(trans_[p][c])].push_back(static_cast<int>(p));

    std::vector<std::vector<int>> blocks;
    std::vector<int> block_of(n, 0);
    {
      std::vector<int> acc, rej;
      for (std::size_t q = 0; q < n; ++q) (accepting_[q] ? acc : rej).push_back(static_cast<int>(q));
      for (auto* b : {&acc, &rej}) {
        if (b->empty()) continue;
        for (int q : *b) block_of[static_cast<std::size_t>(q)] = static_cast<int>(blocks.size());
        blocks.push_back(std::move(*b));
      }
    }

    std::deque<std::pair<int, std::size_t>> work;
    std::vector<std::vector<char>> in_work;
    auto push = [&](int b, std::size_t c) {
      if (in_work.size() <= static_cast<std::size_t>(b)) in_work.resize(static_cast<std::size_t>(b) + 1, std::vector<char>(ncls, 0));
      if (!in_work[static_cast<std::size_t>(b)][c]) {
        in_work[static_cast<std::size_t>(b)][c] = 1;
        work.emplace_back(b, c);
      }
    };
    in_work.resize(blocks.size(), std::vector<char>(ncls, 0));
    if (blocks.size() == 2) {
      int smaller = blocks[0].size() <= blocks[1].size() ? 0 : 1;
      for (std::size_t c = 0; c < ncls; ++c) push(smaller, c);
    }

    std::vector<char> marked(n, 0);
    while (!work.empty()) {
      auto [a, c] = work.front();
      work.pop_front();
      in_work[static_cast<std::size_t>(a)][c] = 0;

      std::vector<int> preimage;
      for (int q : blocks[static_cast<std::size_t>(a)])
        for (int p : inv[c][static_cast<std::size_t>(q)]) preimage.push_back(p);

      std::map<int, std::vector<int>> touched;
      for (int p : preimage) {
        if (marked[static_cast<std::size_t>(p)]) continue;
        marked[static_cast<std::size_t>(p)] = 1;
        touched[block_of[static_cast<std::size_t>(p)]].push_back(p);
      }
      for (int p : preimage) marked[static_cast<std::size_t>(p)] = 0;

      for (auto& [y, inside] : touched) {
        auto& ymembers = blocks[static_cast<std::size_t>(y)];
        if (inside.size() == ymembers.size()) continue;
        std::unordered_set<int> in_set(inside.begin(), inside.end());
        std::vector<int> rest;
        for (int q : ymembers)
          if (!in_set.contains(q)) rest.push_back(q);
        int z = static_cast<int>(blocks.size());
        for (int q : inside) block_of[static_cast<std::size_t>(q)] = z;
        blocks[static_cast<std::size_t>(y)] = std::move(rest);
        blocks.push_back(std::move(inside));
        in_work.resize(blocks.size(), std::vector<char>(ncls, 0));
        for (std::size_t d = 0; d < ncls; ++d) {
          if (in_work[static_cast<std::size_t>(y)][d]) {
            push(z, d);
          } else {
            push(blocks[static_cast<std::size_t>(y)].size() <= blocks[static_cast<std::size_t>(z)].size() ? y : z, d);
          }
        }
      }
    }

    // Quotient, renumbered breadth-first from the initial block.
    std::vector<int> order(blocks.size(), -1);
    std::vector<int> queue{block_of[0]};
    order[static_cast<std::size_t>(block_of[0])] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int rep = blocks[static_cast<std::size_t>(queue[i])].front();
      for (std::size_t c = 0; c < ncls; ++c) {
        int tb = block_of[static_cast<std::size_t>(trans_[static_cast<std::size_t>(rep)][c])];
        if (order[static_cast<std::size_t>(tb)] < 0) {
          order[static_cast<std::size_t>(tb)] = static_cast<int>(queue.size());
          queue.push_back(tb);
        }
      }
    }
    std::vector<std::vector<int>> mtrans(queue.size(), std::vector<int>(ncls));
    std::vector<bool> macc(queue.size());
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int rep = blocks[static_cast<std::size_t>(queue[i])].front();
      macc[i] = accepting_[static_cast<std::size_t>(rep)];
      for (std::size_t c = 0; c < ncls; ++c)
        mtrans[i][c] = order[static_cast<std::size_t>(block_of[static_cast<std::size_t>(trans_[static_cast<std::size_t>(rep)][c])])];
    }
    trans_ = std::move(mtrans);
    accepting_ = std::move(macc);
  }

  // ----------------------------------------------------------------- guards

  std::optional<BoolExpr> guard_for(int node, const std::vector<int>& targets, int target,
                                    std::vector<std::optional<BoolExpr>>& memo) {
    auto& slot = memo[static_cast<std::size_t>(node)];
    if (slot) return slot;
    const TreeNode t = tree_[static_cast<std::size_t>(node)];
    BoolExpr r = BoolExpr::falsity();
    if (t.var < 0) {
      r = targets[static_cast<std::size_t>(t.cls)] == target ? BoolExpr::truth() : BoolExpr::falsity();
    } else {
      BoolExpr hi = *guard_for(t.hi, targets, target, memo);
      BoolExpr lo = *guard_for(t.lo, targets, target, memo);
      const auto v = BoolExpr::atom(vars_[static_cast<std::size_t>(t.var)]);
      const auto T = BoolExpr::Kind::True;
      const auto F = BoolExpr::Kind::False;
      if (hi == lo) r = hi;
      else if (hi.kind() == T && lo.kind() == F) r = v;
      else if (hi.kind() == F && lo.kind() == T) r = BoolExpr::negate(v);
      else if (hi.kind() == T) r = BoolExpr::disj(v, lo);
      else if (lo.kind() == T) r = BoolExpr::disj(BoolExpr::negate(v), hi);
      else if (hi.kind() == F) r = BoolExpr::conj(BoolExpr::negate(v), lo);
      else if (lo.kind() == F) r = BoolExpr::conj(v, hi);
      else r = BoolExpr::disj(BoolExpr::conj(v, hi), BoolExpr::conj(BoolExpr::negate(v), lo));
    }
    slot = r;
    return r;
  }

  Dfa emit(const std::set<Prop>& props) {
    std::vector<std::vector<DfaEdge>> edges(trans_.size());
    for (std::size_t q = 0; q < trans_.size(); ++q) {
      std::set<int> distinct(trans_[q].begin(), trans_[q].end());
      for (int target : distinct) {
        std::vector<std::optional<BoolExpr>> memo(tree_.size());
        edges[q].push_back({*guard_for(0, trans_[q], target, memo), target});
      }
    }
    return Dfa(std::vector<Prop>(props.begin(), props.end()), 0, accepting_, std::move(edges));
  }

  CompileOptions options_;
  std::vector<FNode> fnodes_;
  std::vector<PNode> pnodes_;
  std::map<std::tuple<int, int, int>, int> fmap_;
  std::map<std::tuple<int, int, int>, int> pmap_;
  int true_id_ = -1;
  int false_id_ = -1;
  std::vector<BoolExpr> steps_;
  std::map<std::string, int> step_map_;
  std::unordered_map<int, int> neg_memo_;
  std::unordered_map<int, int> strip_memo_;
  std::unordered_map<int, bool> end_memo_;
  std::unordered_map<std::uint64_t, Dnf> delta_memo_;
  std::unordered_set<std::uint64_t> in_progress_;

  std::vector<Prop> vars_;
  std::vector<TreeNode> tree_;
  std::vector<std::uint64_t> class_masks_;

  std::vector<std::vector<int>> trans_;
  std::vector<bool> accepting_;
};

}  // namespace

Dfa compile(const Formula& f, const std::set<Prop>& props, const CompileOptions& options) {
  return Compiler(options).run(f, props);
}

}  // namespace rdpkit
