#include "rdpkit/logic.hpp"

namespace rdpkit {

namespace {

std::string wrap(bool paren, std::string s) { return paren ? "(" + s + ")" : s; }

// Precedence levels: 1 = or/union, 2 = and/concat, 3 = unary/star, 4 = atom.
std::string bool_at(const BoolExpr& e, int ctx) {
  switch (e.kind()) {
    case BoolExpr::Kind::True: return "true";
    case BoolExpr::Kind::False: return "false";
    case BoolExpr::Kind::Atom: return e.prop().name();
    case BoolExpr::Kind::Not: return "!" + bool_at(e.operand(), 3);
    case BoolExpr::Kind::And: return wrap(ctx > 2, bool_at(e.lhs(), 3) + " & " + bool_at(e.rhs(), 2));
    case BoolExpr::Kind::Or: return wrap(ctx > 1, bool_at(e.lhs(), 2) + " | " + bool_at(e.rhs(), 1));
  }
  return "";
}

std::string formula_at(const Formula& f, int ctx);

std::string path_at(const PathExpr& p, int ctx) {
  switch (p.kind()) {
    case PathExpr::Kind::Step: {
      const auto k = p.step_expr().kind();
      bool binary = k == BoolExpr::Kind::And || k == BoolExpr::Kind::Or;
      return wrap(binary && ctx >= 3, bool_at(p.step_expr(), 1));
    }
    case PathExpr::Kind::Test: return "(" + formula_at(p.test_formula(), 1) + ")?";
    case PathExpr::Kind::Union: return wrap(ctx > 1, path_at(p.lhs(), 2) + " + " + path_at(p.rhs(), 1));
    case PathExpr::Kind::Concat: return wrap(ctx > 2, path_at(p.lhs(), 3) + "; " + path_at(p.rhs(), 2));
    case PathExpr::Kind::Star: return path_at(p.operand(), 3) + "*";
  }
  return "";
}

std::string formula_at(const Formula& f, int ctx) {
  if (f.is_ff()) return "ff";
  if (f.is_end()) return "end";
  switch (f.kind()) {
    case Formula::Kind::TT: return "tt";
    case Formula::Kind::Not: return "!" + formula_at(f.operand(), 3);
    case Formula::Kind::And: return wrap(ctx > 2, formula_at(f.lhs(), 3) + " & " + formula_at(f.rhs(), 2));
    case Formula::Kind::Or: return wrap(ctx > 1, formula_at(f.lhs(), 2) + " | " + formula_at(f.rhs(), 1));
    case Formula::Kind::Diamond: return "<" + path_at(f.path(), 1) + ">" + formula_at(f.operand(), 3);
    case Formula::Kind::Box: return "[" + path_at(f.path(), 1) + "]" + formula_at(f.operand(), 3);
  }
  return "";
}

}  // namespace

std::string print_ldlf(const Formula& f) { return formula_at(f, 1); }
std::string print_bool(const BoolExpr& e) { return bool_at(e, 1); }
std::string print_path(const PathExpr& p) { return path_at(p, 1); }

}  // namespace rdpkit
