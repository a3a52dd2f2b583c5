#include <algorithm>

#include "doctest.h"
#include "gen.hpp"
#include "rdpkit/errors.hpp"
#include "rdpkit/logic.hpp"

using namespace rdpkit;

namespace {

Trace trace(std::initializer_list<std::initializer_list<const char*>> labels) {
  Trace h;
  for (auto l : labels) {
    Label s;
    for (const char* p : l) s.insert(Prop(p));
    h.push_back(s);
  }
  return h;
}

}  // namespace

TEST_CASE("prop names") {
  CHECK(is_valid_prop_name("x_is2"));
  CHECK(is_valid_prop_name("_c"));
  CHECK_FALSE(is_valid_prop_name(""));
  CHECK_FALSE(is_valid_prop_name("2x"));
  CHECK_FALSE(is_valid_prop_name("end"));
  CHECK_FALSE(is_valid_prop_name("true"));
  CHECK_THROWS_AS(Prop("a-b"), Error);
  CHECK(Prop("c") == Prop(std::string("c")));
}

TEST_CASE("parse liveness pattern") {
  Formula f = parse_ldlf("<true*; c; true*>end");
  REQUIRE(f.kind() == Formula::Kind::Diamond);
  CHECK(f.operand().is_end());
  const PathExpr& p = f.path();
  REQUIRE(p.kind() == PathExpr::Kind::Concat);
  CHECK(p.lhs().kind() == PathExpr::Kind::Star);
  CHECK(p.lhs().operand().step_expr().kind() == BoolExpr::Kind::True);
  REQUIRE(p.rhs().kind() == PathExpr::Kind::Concat);
  CHECK(p.rhs().lhs().step_expr() == BoolExpr::atom("c"));
  CHECK(p.rhs().rhs().kind() == PathExpr::Kind::Star);
}

TEST_CASE("end and ff desugar") {
  CHECK(parse_ldlf("tt") == Formula::tt());
  CHECK(parse_ldlf("ff") == Formula::negate(Formula::tt()));
  CHECK(parse_ldlf("end") == Formula::box(PathExpr::step(BoolExpr::truth()), Formula::negate(Formula::tt())));
  CHECK(parse_ldlf("[true]ff") == Formula::end());
}

TEST_CASE("syntax errors carry position and expected set") {
  try {
    parse_ldlf("<true*");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 7);
    const auto& ex = e.expected();
    CHECK(std::find(ex.begin(), ex.end(), "`>`") != ex.end());
  }
  CHECK_THROWS_AS(parse_ldlf("tt &"), SyntaxError);
  CHECK_THROWS_AS(parse_ldlf("<c>"), SyntaxError);
  CHECK_THROWS_AS(parse_ldlf("c"), SyntaxError);
  CHECK_THROWS_AS(parse_ldlf("tt $"), SyntaxError);
  try {
    parse_ldlf("tt &\n  <c");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("printer") {
  CHECK(print_ldlf(Formula::tt()) == "tt");
  CHECK(print_ldlf(Formula::diamond(PathExpr::star(PathExpr::step(BoolExpr::atom("c"))), Formula::tt())) == "<c*>tt");
  const char* safety = "[true*]<(!x_is1 & !y_is2)*>end";
  CHECK(parse_ldlf(print_ldlf(parse_ldlf(safety))) == parse_ldlf(safety));
  CHECK(print_ldlf(parse_ldlf(safety)) == safety);
  CHECK(print_ldlf(parse_ldlf("<true*; c; true*>end")) == "<true*; c; true*>end");
  CHECK(print_ldlf(parse_ldlf("<(tt)?; a + b>ff")) == "<(tt)?; a + b>ff");
}

TEST_CASE("eval_trace examples") {
  Formula live = parse_ldlf("<true*; c; true*>end");
  CHECK(eval_trace(live, trace({{}, {"c"}, {}})));
  CHECK_FALSE(eval_trace(live, trace({{}, {}})));
  CHECK_FALSE(eval_trace(live, {}));
  CHECK(eval_trace(Formula::tt(), {}));
  CHECK(eval_trace(Formula::tt(), trace({{"c"}})));
  CHECK_FALSE(eval_trace(Formula::ff(), {}));
  CHECK(eval_trace(Formula::end(), {}));
  CHECK_FALSE(eval_trace(Formula::end(), trace({{}})));
  // test construct consumes no position
  CHECK(eval_trace(parse_ldlf("<(<c>tt)?; c>end"), trace({{"c"}})));
  CHECK_FALSE(eval_trace(parse_ldlf("<(<c>tt)?; c>end"), trace({{}})));
}

TEST_CASE("property: print/parse round trip") {
  gen::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    auto ps = gen::props(1 + gen::pick(rng, 5));
    Formula f = gen::formula(rng, ps, gen::pick(rng, 7));
    std::string text = print_ldlf(f);
    INFO(text);
    CHECK(parse_ldlf(text) == f);
  }
}

TEST_CASE("property: boolean laws at trace level") {
  gen::Rng rng(12);
  auto ps = gen::props(2);
  auto labels = gen::all_labels(ps);
  for (int i = 0; i < 150; ++i) {
    Formula f = gen::formula(rng, ps, 3);
    Formula g = gen::formula(rng, ps, 3);
    gen::for_each_trace(labels, 3, [&](const Trace& h) {
      bool vf = eval_trace(f, h);
      bool vg = eval_trace(g, h);
      CHECK(eval_trace(Formula::negate(f), h) == !vf);
      CHECK(eval_trace(Formula::conj(f, g), h) == (vf && vg));
      CHECK(eval_trace(Formula::disj(f, g), h) == (vf || vg));
    });
  }
}

TEST_CASE("property: safety and liveness patterns, exhaustive") {
  Formula safety = parse_ldlf("[true*]<c*>end");
  Formula live = parse_ldlf("<true*; c; true*>end");
  auto labels = gen::all_labels({Prop("c")});
  int count = 0;
  gen::for_each_trace(labels, 5, [&](const Trace& h) {
    bool all = std::all_of(h.begin(), h.end(), [](const Label& l) { return l.contains(Prop("c")); });
    bool some = std::any_of(h.begin(), h.end(), [](const Label& l) { return l.contains(Prop("c")); });
    CHECK(eval_trace(safety, h) == all);
    CHECK(eval_trace(live, h) == some);
    ++count;
  });
  CHECK(count == 63);
}
