#include "doctest.h"
#include "wronsky/parse.hpp"

using namespace wronsky;

TEST_CASE("jet suffixes and diff() denote the same variable") {
  CHECK(parse_expr("diff(b,y)") == parse_expr("b_y"));
  CHECK(parse_expr("diff(a,x,y)") == parse_expr("a_xy"));
  CHECK(parse_expr("a_yx") == parse_expr("a_xy"));
  CHECK(parse_expr("diff(z,x,x,y)") == parse_expr("z_xxy"));
}

TEST_CASE("identifiers") {
  CHECK(parse_expr("psi1_y").str() == "psi1_y");
  CHECK(parse_expr("alpha + beta").str() == "alpha + beta");
  // an underscore whose tail is not all x/y belongs to the name
  CHECK(parse_expr("my_fun").str() == "my_fun");
}

TEST_CASE("precedence and unary minus") {
  CHECK(parse_expr("-x + y") == parse_expr("y - x"));
  CHECK(parse_expr("2*x^2") == parse_expr("2*(x^2)"));
  CHECK(parse_expr("x - y - y") == parse_expr("x - 2*y"));
  CHECK(parse_expr("6/2/3").str() == "1");
  CHECK(parse_expr("q^-1") == Expr::one() / parse_expr("q"));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_expr("a + "), ParseError);
  CHECK_THROWS_AS(parse_expr("(x + y"), ParseError);
  CHECK_THROWS_AS(parse_expr("x $ y"), ParseError);
  CHECK_THROWS_AS(parse_expr("diff(a, q)"), ParseError);
  try {
    parse_expr("x + @");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("Dx and Dy are reserved words") {
  CHECK_THROWS_AS(parse_expr("Dx + 1"), ParseError);
  CHECK_THROWS_AS(parse_expr("q*Dy"), ParseError);
}

TEST_CASE("operator terms") {
  auto terms = parse_operator_terms("Dx*Dy + a*Dx + b*Dy + c");
  REQUIRE(terms.size() == 4);
  CHECK(terms[0].dx == 1);
  CHECK(terms[0].dy == 1);
  CHECK(terms[0].coeff.is_one());
  CHECK(terms[3].coeff == parse_expr("c"));

  auto neg = parse_operator_terms("Dx - Dy");
  CHECK(neg[1].coeff == -Expr::one());

  auto pow = parse_operator_terms("3*Dx^2*Dy - x/2*Dx");
  CHECK(pow[0].dx == 2);
  CHECK(pow[0].dy == 1);
  CHECK(pow[1].coeff == parse_expr("-x/2"));

  CHECK_THROWS_AS(parse_operator_terms("1/Dx"), ParseError);
  CHECK_THROWS_AS(parse_operator_terms("Dx^-1"), ParseError);
}
