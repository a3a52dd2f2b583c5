#include <optional>
#include <set>

#include "rdpkit/errors.hpp"
#include "rdpkit/logic.hpp"

namespace rdpkit {

namespace {

enum class Tok {
  TT, FF, End, True, False, Ident,
  Bang, Amp, Bar, Lt, Gt, LBrack, RBrack, LParen, RParen, Quest, Semi, Plus, Star,
  Eof
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::TT: return "`tt`";
    case Tok::FF: return "`ff`";
    case Tok::End: return "`end`";
    case Tok::True: return "`true`";
    case Tok::False: return "`false`";
    case Tok::Ident: return "proposition";
    case Tok::Bang: return "`!`";
    case Tok::Amp: return "`&`";
    case Tok::Bar: return "`|`";
    case Tok::Lt: return "`<`";
    case Tok::Gt: return "`>`";
    case Tok::LBrack: return "`[`";
    case Tok::RBrack: return "`]`";
    case Tok::LParen: return "`(`";
    case Tok::RParen: return "`)`";
    case Tok::Quest: return "`?`";
    case Tok::Semi: return "`;`";
    case Tok::Plus: return "`+`";
    case Tok::Star: return "`*`";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto ident_start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto ident_char = [&](char c) { return ident_start(c) || (c >= '0' && c <= '9'); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "tt") kind = Tok::TT;
      else if (word == "ff") kind = Tok::FF;
      else if (word == "end") kind = Tok::End;
      else if (word == "true") kind = Tok::True;
      else if (word == "false") kind = Tok::False;
      out.push_back({kind, word, line, col});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    Tok kind;
    switch (c) {
      case '!': kind = Tok::Bang; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      case '<': kind = Tok::Lt; break;
      case '>': kind = Tok::Gt; break;
      case '[': kind = Tok::LBrack; break;
      case ']': kind = Tok::RBrack; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '?': kind = Tok::Quest; break;
      case ';': kind = Tok::Semi; break;
      case '+': kind = Tok::Plus; break;
      case '*': kind = Tok::Star; break;
      default:
        throw SyntaxError(line, col, {"token"}, std::string("character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), line, col});
    ++col;
    ++i;
  }
  out.push_back({Tok::Eof, "", line, col});
  return out;
}

// Backtracking recursive descent. Failures record the furthest token reached
// together with the set of tokens that would have been accepted there.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula parse_all() {
    auto f = formula();
    if (f && peek() == Tok::Eof) return *f;
    if (f) expect_fail({Tok::Amp, Tok::Bar, Tok::Eof});
    const Token& at = toks_[furthest_];
    std::vector<std::string> expected(expected_.begin(), expected_.end());
    throw SyntaxError(at.line, at.column, expected,
                      at.kind == Tok::Eof ? "end of input" : "`" + at.text + "`");
  }

 private:
  Tok peek() const { return toks_[pos_].kind; }

  bool accept(Tok t) {
    if (peek() == t) {
      ++pos_;
      return true;
    }
    expect_fail({t});
    return false;
  }

  void expect_fail(std::initializer_list<Tok> ts) {
    if (pos_ > furthest_) {
      furthest_ = pos_;
      expected_.clear();
    }
    if (pos_ == furthest_)
      for (Tok t : ts) expected_.insert(describe(t));
  }

  // formula := and ('|' formula)?
  std::optional<Formula> formula() {
    auto lhs = formula_and();
    if (!lhs) return std::nullopt;
    std::size_t save = pos_;
    if (accept(Tok::Bar)) {
      auto rhs = formula();
      if (!rhs) {
        pos_ = save;
        return std::nullopt;
      }
      return Formula::disj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<Formula> formula_and() {
    auto lhs = formula_unary();
    if (!lhs) return std::nullopt;
    std::size_t save = pos_;
    if (accept(Tok::Amp)) {
      auto rhs = formula_and();
      if (!rhs) {
        pos_ = save;
        return std::nullopt;
      }
      return Formula::conj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<Formula> formula_unary() {
    std::size_t save = pos_;
    switch (peek()) {
      case Tok::TT: ++pos_; return Formula::tt();
      case Tok::FF: ++pos_; return Formula::ff();
      case Tok::End: ++pos_; return Formula::end();
      case Tok::Bang: {
        ++pos_;
        auto f = formula_unary();
        if (!f) break;
        return Formula::negate(*f);
      }
      case Tok::Lt: {
        ++pos_;
        auto p = path();
        if (!p || !accept(Tok::Gt)) break;
        auto f = formula_unary();
        if (!f) break;
        return Formula::diamond(*p, *f);
      }
      case Tok::LBrack: {
        ++pos_;
        auto p = path();
        if (!p || !accept(Tok::RBrack)) break;
        auto f = formula_unary();
        if (!f) break;
        return Formula::box(*p, *f);
      }
      case Tok::LParen: {
        ++pos_;
        auto f = formula();
        if (!f || !accept(Tok::RParen)) break;
        return f;
      }
      default:
        expect_fail({Tok::TT, Tok::FF, Tok::End, Tok::Bang, Tok::Lt, Tok::LBrack, Tok::LParen});
        break;
    }
    pos_ = save;
    return std::nullopt;
  }

  // path := concat ('+' path)?
  std::optional<PathExpr> path() {
    auto lhs = path_concat();
    if (!lhs) return std::nullopt;
    std::size_t save = pos_;
    if (accept(Tok::Plus)) {
      auto rhs = path();
      if (!rhs) {
        pos_ = save;
        return std::nullopt;
      }
      return PathExpr::alt(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<PathExpr> path_concat() {
    auto lhs = path_star();
    if (!lhs) return std::nullopt;
    std::size_t save = pos_;
    if (accept(Tok::Semi)) {
      auto rhs = path_concat();
      if (!rhs) {
        pos_ = save;
        return std::nullopt;
      }
      return PathExpr::concat(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<PathExpr> path_star() {
    auto p = path_atom();
    if (!p) return std::nullopt;
    while (accept(Tok::Star)) p = PathExpr::star(*p);
    return p;
  }

  std::optional<PathExpr> path_atom() {
    std::size_t save = pos_;
    if (auto f = formula(); f && accept(Tok::Quest)) return PathExpr::test(*f);
    pos_ = save;
    if (auto b = bool_or()) return PathExpr::step(*b);
    pos_ = save;
    if (accept(Tok::LParen)) {
      auto p = path();
      if (p && accept(Tok::RParen)) return p;
    }
    pos_ = save;
    return std::nullopt;
  }

  std::optional<BoolExpr> bool_or() {
    auto lhs = bool_and();
    if (!lhs) return std::nullopt;
    std::size_t save = pos_;
    if (accept(Tok::Bar)) {
      auto rhs = bool_or();
      if (!rhs) {
        pos_ = save;
        return std::nullopt;
      }
      return BoolExpr::disj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<BoolExpr> bool_and() {
    auto lhs = bool_unary();
    if (!lhs) return std::nullopt;
    std::size_t save = pos_;
    if (accept(Tok::Amp)) {
      auto rhs = bool_and();
      if (!rhs) {
        pos_ = save;
        return std::nullopt;
      }
      return BoolExpr::conj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<BoolExpr> bool_unary() {
    std::size_t save = pos_;
    switch (peek()) {
      case Tok::True: ++pos_; return BoolExpr::truth();
      case Tok::False: ++pos_; return BoolExpr::falsity();
      case Tok::Ident: return BoolExpr::atom(Prop(toks_[pos_++].text));
      case Tok::Bang: {
        ++pos_;
        auto e = bool_unary();
        if (!e) break;
        return BoolExpr::negate(*e);
      }
      case Tok::LParen: {
        ++pos_;
        auto e = bool_or();
        if (!e || !accept(Tok::RParen)) break;
        return e;
      }
      default:
        expect_fail({Tok::True, Tok::False, Tok::Ident, Tok::Bang, Tok::LParen});
        break;
    }
    pos_ = save;
    return std::nullopt;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t furthest_ = 0;
  std::set<std::string> expected_;
};

}  // namespace

Formula parse_ldlf(std::string_view text) { return Parser(tokenize(text)).parse_all(); }

}  // namespace rdpkit
