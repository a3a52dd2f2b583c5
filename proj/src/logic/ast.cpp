#include <optional>

#include "rdpkit/errors.hpp"
#include "rdpkit/logic.hpp"

namespace rdpkit {

namespace {

bool is_keyword(std::string_view s) {
  return s == "tt" || s == "ff" || s == "end" || s == "true" || s == "false";
}

}  // namespace

bool is_valid_prop_name(std::string_view name) {
  if (name.empty() || is_keyword(name)) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  for (char c : name)
    if (!alpha(c) && !digit(c)) return false;
  return true;
}

Prop::Prop(std::string name) : name_(std::move(name)) {
  if (!is_valid_prop_name(name_)) throw Error("invalid proposition name '" + name_ + "'");
}

// ---------------------------------------------------------------- BoolExpr

struct BoolExpr::Rep {
  Kind kind;
  std::optional<Prop> prop;
  std::optional<BoolExpr> lhs;
  std::optional<BoolExpr> rhs;
};

BoolExpr BoolExpr::truth() {
  static const BoolExpr t(std::make_shared<const Rep>(Rep{Kind::True, {}, {}, {}}));
  return t;
}

BoolExpr BoolExpr::falsity() {
  static const BoolExpr f(std::make_shared<const Rep>(Rep{Kind::False, {}, {}, {}}));
  return f;
}

BoolExpr BoolExpr::atom(Prop p) {
  return BoolExpr(std::make_shared<const Rep>(Rep{Kind::Atom, std::move(p), {}, {}}));
}

BoolExpr BoolExpr::negate(BoolExpr e) {
  return BoolExpr(std::make_shared<const Rep>(Rep{Kind::Not, {}, std::move(e), {}}));
}

BoolExpr BoolExpr::conj(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(std::make_shared<const Rep>(Rep{Kind::And, {}, std::move(lhs), std::move(rhs)}));
}

BoolExpr BoolExpr::disj(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(std::make_shared<const Rep>(Rep{Kind::Or, {}, std::move(lhs), std::move(rhs)}));
}

BoolExpr::Kind BoolExpr::kind() const noexcept { return rep_->kind; }
const Prop& BoolExpr::prop() const { return *rep_->prop; }
const BoolExpr& BoolExpr::operand() const { return *rep_->lhs; }
const BoolExpr& BoolExpr::lhs() const { return *rep_->lhs; }
const BoolExpr& BoolExpr::rhs() const { return *rep_->rhs; }

bool BoolExpr::eval(const Label& label) const {
  switch (kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return label.contains(prop());
    case Kind::Not: return !operand().eval(label);
    case Kind::And: return lhs().eval(label) && rhs().eval(label);
    case Kind::Or: return lhs().eval(label) || rhs().eval(label);
  }
  return false;
}

void BoolExpr::collect_props(std::set<Prop>& out) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False: return;
    case Kind::Atom: out.insert(prop()); return;
    case Kind::Not: operand().collect_props(out); return;
    case Kind::And:
    case Kind::Or:
      lhs().collect_props(out);
      rhs().collect_props(out);
      return;
  }
}

bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False: return true;
    case BoolExpr::Kind::Atom: return a.prop() == b.prop();
    case BoolExpr::Kind::Not: return a.operand() == b.operand();
    case BoolExpr::Kind::And:
    case BoolExpr::Kind::Or: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

// ----------------------------------------------------------------- Formula

struct Formula::Rep {
  Kind kind;
  std::optional<Formula> lhs;  // Not/Diamond/Box use lhs as operand
  std::optional<Formula> rhs;
  std::optional<PathExpr> path;
};

struct PathExpr::Rep {
  Kind kind;
  std::optional<BoolExpr> step;
  std::optional<Formula> test;
  std::optional<PathExpr> lhs;  // Star uses lhs as operand
  std::optional<PathExpr> rhs;
};

Formula Formula::tt() {
  static const Formula t(std::make_shared<const Rep>(Rep{Kind::TT, {}, {}, {}}));
  return t;
}

Formula Formula::ff() { return negate(tt()); }

Formula Formula::end() { return box(PathExpr::step(BoolExpr::truth()), ff()); }

Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Rep>(Rep{Kind::Not, std::move(f), {}, {}}));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Rep>(Rep{Kind::And, std::move(lhs), std::move(rhs), {}}));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Rep>(Rep{Kind::Or, std::move(lhs), std::move(rhs), {}}));
}

Formula Formula::diamond(PathExpr path, Formula f) {
  return Formula(std::make_shared<const Rep>(Rep{Kind::Diamond, std::move(f), {}, std::move(path)}));
}

Formula Formula::box(PathExpr path, Formula f) {
  return Formula(std::make_shared<const Rep>(Rep{Kind::Box, std::move(f), {}, std::move(path)}));
}

Formula::Kind Formula::kind() const noexcept { return rep_->kind; }
const Formula& Formula::operand() const { return *rep_->lhs; }
const Formula& Formula::lhs() const { return *rep_->lhs; }
const Formula& Formula::rhs() const { return *rep_->rhs; }
const PathExpr& Formula::path() const { return *rep_->path; }

bool Formula::is_ff() const { return kind() == Kind::Not && operand().kind() == Kind::TT; }

bool Formula::is_end() const {
  return kind() == Kind::Box && path().kind() == PathExpr::Kind::Step &&
         path().step_expr().kind() == BoolExpr::Kind::True && operand().is_ff();
}

namespace {

void collect(const Formula& f, std::set<Prop>& out);

void collect(const PathExpr& p, std::set<Prop>& out) {
  switch (p.kind()) {
    case PathExpr::Kind::Step: p.step_expr().collect_props(out); return;
    case PathExpr::Kind::Test: collect(p.test_formula(), out); return;
    case PathExpr::Kind::Union:
    case PathExpr::Kind::Concat:
      collect(p.lhs(), out);
      collect(p.rhs(), out);
      return;
    case PathExpr::Kind::Star: collect(p.operand(), out); return;
  }
}

void collect(const Formula& f, std::set<Prop>& out) {
  switch (f.kind()) {
    case Formula::Kind::TT: return;
    case Formula::Kind::Not: collect(f.operand(), out); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect(f.lhs(), out);
      collect(f.rhs(), out);
      return;
    case Formula::Kind::Diamond:
    case Formula::Kind::Box:
      collect(f.path(), out);
      collect(f.operand(), out);
      return;
  }
}

}  // namespace

std::set<Prop> Formula::props() const {
  std::set<Prop> out;
  collect(*this, out);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::TT: return true;
    case Formula::Kind::Not: return a.operand() == b.operand();
    case Formula::Kind::And:
    case Formula::Kind::Or: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Formula::Kind::Diamond:
    case Formula::Kind::Box: return a.path() == b.path() && a.operand() == b.operand();
  }
  return false;
}

// ---------------------------------------------------------------- PathExpr

PathExpr PathExpr::step(BoolExpr e) {
  return PathExpr(std::make_shared<const Rep>(Rep{Kind::Step, std::move(e), {}, {}, {}}));
}

PathExpr PathExpr::test(Formula f) {
  return PathExpr(std::make_shared<const Rep>(Rep{Kind::Test, {}, std::move(f), {}, {}}));
}

PathExpr PathExpr::alt(PathExpr lhs, PathExpr rhs) {
  return PathExpr(std::make_shared<const Rep>(Rep{Kind::Union, {}, {}, std::move(lhs), std::move(rhs)}));
}

PathExpr PathExpr::concat(PathExpr lhs, PathExpr rhs) {
  return PathExpr(std::make_shared<const Rep>(Rep{Kind::Concat, {}, {}, std::move(lhs), std::move(rhs)}));
}

PathExpr PathExpr::star(PathExpr p) {
  return PathExpr(std::make_shared<const Rep>(Rep{Kind::Star, {}, {}, std::move(p), {}}));
}

PathExpr::Kind PathExpr::kind() const noexcept { return rep_->kind; }
const BoolExpr& PathExpr::step_expr() const { return *rep_->step; }
const Formula& PathExpr::test_formula() const { return *rep_->test; }
const PathExpr& PathExpr::lhs() const { return *rep_->lhs; }
const PathExpr& PathExpr::rhs() const { return *rep_->rhs; }
const PathExpr& PathExpr::operand() const { return *rep_->lhs; }

bool operator==(const PathExpr& a, const PathExpr& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case PathExpr::Kind::Step: return a.step_expr() == b.step_expr();
    case PathExpr::Kind::Test: return a.test_formula() == b.test_formula();
    case PathExpr::Kind::Union:
    case PathExpr::Kind::Concat: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case PathExpr::Kind::Star: return a.operand() == b.operand();
  }
  return false;
}

}  // namespace rdpkit
