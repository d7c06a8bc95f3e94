#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "irb/expr.hpp"

using namespace irb::expr;

namespace {

// Expressions from the builtin scenarios plus precedence and call fixtures.
const std::vector<std::string> kCorpus = {
    "2*x",
    "(1/2)*x*(t-1)",
    "ge(x, 2-t)",
    "2*x*(t-1)",
    "x/2 + ge(t, 1.5)/2",
    "1/sqrt(x)",
    "1.5",
    "x/2 + 1/2",
    "1 - x^2/2",
    "-x/2 + 1/2",
    "-x^2",
    "(-x)^2",
    "2^3^2",
    "-2^-2",
    "x - (t - x)",
    "x / (t / x)",
    "x - t - x",
    "clamp(x, 0, 1) * max(t, 1) - min(x, t)",
    "exp(-x) + ln(1 + x) + sin(pi*x) * cos(t)",
    "floor(t) + abs(x - 0.5)",
    "le(x, 0.5) * lt(t, 1.5) + gt(x, 0.25)",
    "1e-6 + 2.5E+3*x",
    ".5*x",
    "((x))",
};

Expr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  switch (pick(rng)) {
    case 0: return Expr::constant(std::round(val(rng) * 4.0) / 4.0);
    case 1: return Expr::variable(Var::x);
    case 2: return Expr::variable(Var::t);
    case 3: return Expr::unary_neg(random_expr(rng, depth - 1));
    case 4: return Expr::binary(NodeKind::add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return Expr::binary(NodeKind::sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: return Expr::binary(NodeKind::mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7: return Expr::binary(NodeKind::div, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 8: return Expr::binary(NodeKind::pow, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default: return Expr::call(Builtin::max, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
  }
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("tokenize splits a product") {
  const auto toks = tokenize("2*x");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].kind == TokenKind::number);
  CHECK(toks[0].lexeme == "2");
  CHECK(toks[1].kind == TokenKind::op);
  CHECK(toks[1].lexeme == "*");
  CHECK(toks[2].kind == TokenKind::variable);
  CHECK(toks[2].lexeme == "x");
}

TEST_CASE("tokenize the exa1 s formula") {
  // ( 1 / 2 ) * x * ( t - 1 )
  CHECK(tokenize("(1/2)*x*(t-1)").size() == 13);
  CHECK(eval(parse("(1/2)*x*(t-1)"), 2.0, 1.0) == 0.5);
}

TEST_CASE("lex error carries the offset") {
  try {
    tokenize("2 @ x");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(tokenize("1e+"), LexError);
}

TEST_CASE("unicode minus is a minus") {
  CHECK(parse("2 \xE2\x88\x92 x") == parse("2 - x"));
}

TEST_CASE("unary minus binds below power") {
  const Expr e = parse("-x^2");
  REQUIRE(e.kind() == NodeKind::neg);
  CHECK(e.child(0).kind() == NodeKind::pow);
  CHECK(eval(e, 0.0, 3.0) == -9.0);
  CHECK(eval(parse("2^3^2"), 0, 0) == 512.0);
  CHECK(eval(parse("2^-1"), 0, 0) == 0.5);
}

TEST_CASE("calls parse with their arguments") {
  const Expr e = parse("ge(x, 2 - t)");
  REQUIRE(e.kind() == NodeKind::call);
  CHECK(e.builtin() == Builtin::ge);
  REQUIRE(e.arity() == 2);
  CHECK(e.child(0).kind() == NodeKind::var_x);
  CHECK(e.child(1).kind() == NodeKind::sub);
}

TEST_CASE("parse errors") {
  try {
    parse("x + ");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(e.expected() == "operand");
  }
  CHECK_THROWS_AS(parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse("ge(x)"), ParseError);
  CHECK_THROWS_AS(parse("(x"), ParseError);
  CHECK_THROWS_AS(parse("x y"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("indicator boundary counts") {
  CHECK(eval(parse("ge(x, 2-t)"), 1.5, 0.5) == 1.0);
  CHECK(eval(parse("gt(x, 2-t)"), 1.5, 0.5) == 0.0);
  CHECK(eval(parse("le(x, 1)"), 0, 1) == 1.0);
  CHECK(eval(parse("lt(x, 1)"), 0, 1) == 0.0);
}

TEST_CASE("builtins evaluate") {
  CHECK(eval(parse("floor(t)"), 2.7, 0) == 2.0);
  CHECK(eval(parse("abs(x)"), 0, -3) == 3.0);
  CHECK(eval(parse("clamp(x, 0, 1)"), 0, 4) == 1.0);
  CHECK(eval(parse("min(x, t)"), 1, 2) == 1.0);
  CHECK(eval(parse("max(x, t)"), 1, 2) == 2.0);
  CHECK(eval(parse("exp(0) + ln(1)"), 0, 0) == 1.0);
  CHECK(eval(parse("sin(pi/2)"), 0, 0) == doctest::Approx(1.0));
  CHECK(eval(parse("cos(0)"), 0, 0) == 1.0);
  CHECK(eval(parse("(-2)^3"), 0, 0) == -8.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval(parse("sqrt(x)"), 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(eval(parse("ln(x)"), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse("1/x"), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse("x^0.5"), 1.0, -4.0), DomainError);
  CHECK_THROWS_AS(eval(parse("0^(-1)"), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse("exp(x)"), 1.0, 1000.0), DomainError);
  CHECK_THROWS_AS(eval(parse("clamp(x, 1, 0)"), 1.0, 0.5), DomainError);
  try {
    eval(parse("1 + sqrt(x)"), 0, -1);
  } catch (const DomainError& e) {
    CHECK(e.node() == "sqrt(x)");
    CHECK(e.position() == 4);
  }
}

TEST_CASE("eval is pure") {
  const Expr e = parse("exp(-x) + ln(1 + x) + sin(pi*x) * cos(t)");
  const double a = eval(e, 1.3, 0.7);
  for (int i = 0; i < 10; ++i) CHECK(eval(e, 1.3, 0.7) == a);
}

TEST_CASE("corpus round-trips through the printer") {
  for (const auto& src : kCorpus) {
    CAPTURE(src);
    const Expr e = parse(src);
    const std::string printed = to_string(e);
    CAPTURE(printed);
    CHECK(parse(printed) == e);
  }
}

TEST_CASE("random trees round-trip through the printer") {
  std::mt19937 rng(20240611);
  for (int i = 0; i < 500; ++i) {
    const Expr e = random_expr(rng, 5);
    const std::string printed = to_string(e);
    CAPTURE(printed);
    CHECK(parse(printed) == e);
  }
}

TEST_CASE("analysis helpers") {
  CHECK(depends_on(parse("x + 1"), Var::x));
  CHECK_FALSE(depends_on(parse("x + 1"), Var::t));
  CHECK(fold_constant(parse("1/2 + 1/4")) == 0.75);
  CHECK_FALSE(fold_constant(parse("x")).has_value());
  CHECK(degree(parse("x/2 + ge(t, 1.5)/2"), Var::x) == 1);
  CHECK(degree(parse("1 - x^2/2"), Var::x) == 2);
  CHECK(degree(parse("(1/2)*x*(t-1)"), Var::t) == 1);
  CHECK_FALSE(degree(parse("sqrt(x)"), Var::x).has_value());
  CHECK_FALSE(degree(parse("1/x"), Var::x).has_value());
  CHECK(eval(scaled(2.0, parse("x/2")), 0, 3) == 3.0);
  CHECK(bind(parse("ge(x, 2-t)"), Var::t, 1.0) == parse("ge(x, 2-1)"));
}

}  // TEST_SUITE
