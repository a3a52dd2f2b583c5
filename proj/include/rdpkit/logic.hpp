#pragma once

// LDLf formulas: abstract syntax, concrete text syntax and the direct
// finite-trace semantics.
//
// Concrete syntax (ASCII):
//
//   formula := "tt" | "ff" | "end" | "!" formula | formula "&" formula
//            | formula "|" formula | "<" path ">" formula
//            | "[" path "]" formula | "(" formula ")"
//   path    := boolexpr | formula "?" | path ";" path | path "+" path
//            | path "*" | "(" path ")"
//   boolexpr:= "true" | "false" | ident | "!" boolexpr
//            | boolexpr "&" boolexpr | boolexpr "|" boolexpr | "(" boolexpr ")"
//
// Unary operators bind tightest, then "&", then "|". In paths "*" binds
// tighter than ";" which binds tighter than "+". All binary operators
// associate to the right.

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rdpkit {

/// Atomic proposition. Names match [A-Za-z_][A-Za-z0-9_]* and are not keywords.
class Prop {
 public:
  Prop(std::string name);  // NOLINT(google-explicit-constructor)
  Prop(const char* name) : Prop(std::string(name)) {}  // NOLINT(google-explicit-constructor)

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Prop&, const Prop&) = default;
  friend auto operator<=>(const Prop&, const Prop&) = default;

 private:
  std::string name_;
};

bool is_valid_prop_name(std::string_view name);

/// A letter of the alphabet 2^P: the set of propositions that hold.
using Label = std::set<Prop>;
using Trace = std::vector<Label>;

class BoolExpr {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  static BoolExpr truth();
  static BoolExpr falsity();
  static BoolExpr atom(Prop p);
  static BoolExpr negate(BoolExpr e);
  static BoolExpr conj(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr disj(BoolExpr lhs, BoolExpr rhs);

  Kind kind() const noexcept;
  const Prop& prop() const;       // Atom
  const BoolExpr& operand() const;  // Not
  const BoolExpr& lhs() const;    // And, Or
  const BoolExpr& rhs() const;    // And, Or

  bool eval(const Label& label) const;
  void collect_props(std::set<Prop>& out) const;

  friend bool operator==(const BoolExpr& a, const BoolExpr& b);

 private:
  struct Rep;
  explicit BoolExpr(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

class PathExpr;

/// LDLf formula. `ff` and `end` are sugar: ff = !tt, end = [true]ff.
class Formula {
 public:
  enum class Kind { TT, Not, And, Or, Diamond, Box };

  static Formula tt();
  static Formula ff();
  static Formula end();
  static Formula negate(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula diamond(PathExpr path, Formula f);
  static Formula box(PathExpr path, Formula f);

  Kind kind() const noexcept;
  const Formula& operand() const;  // Not; body of Diamond/Box
  const Formula& lhs() const;      // And, Or
  const Formula& rhs() const;      // And, Or
  const PathExpr& path() const;    // Diamond, Box

  bool is_ff() const;
  bool is_end() const;

  std::set<Prop> props() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Rep;
  explicit Formula(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
  friend class PathExpr;
};

class PathExpr {
 public:
  enum class Kind { Step, Test, Union, Concat, Star };

  static PathExpr step(BoolExpr e);
  static PathExpr test(Formula f);
  static PathExpr alt(PathExpr lhs, PathExpr rhs);
  static PathExpr concat(PathExpr lhs, PathExpr rhs);
  static PathExpr star(PathExpr p);

  Kind kind() const noexcept;
  const BoolExpr& step_expr() const;  // Step
  const Formula& test_formula() const;  // Test
  const PathExpr& lhs() const;         // Union, Concat
  const PathExpr& rhs() const;         // Union, Concat
  const PathExpr& operand() const;     // Star

  friend bool operator==(const PathExpr& a, const PathExpr& b);

 private:
  struct Rep;
  explicit PathExpr(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
  friend class Formula;
};

/// Parses the concrete syntax; throws SyntaxError with a 1-based position.
Formula parse_ldlf(std::string_view text);

std::string print_ldlf(const Formula& f);
std::string print_bool(const BoolExpr& e);
std::string print_path(const PathExpr& p);

/// Direct recursive semantics over a finite trace. Positions range over
/// 0..|h|; position |h| is the empty suffix where tt holds, `<step>phi`
/// fails and `[step]phi` holds.
bool eval_trace(const Formula& f, const Trace& h);

}  // namespace rdpkit
