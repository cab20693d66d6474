#include <random>

#include "doctest.h"
#include "wronsky/darboux.hpp"
#include "wronsky/invariants.hpp"
#include "wronsky/parse.hpp"

using namespace wronsky;

namespace {

Expr E(const char* text) { return parse_expr(text); }
LPDO Op(const char* text) { return parse_lpdo(text); }

const HyperbolicL kTrivial{Expr::zero(), Expr::zero(), Expr::zero()};
const HyperbolicL kGeneric{Expr::jet("a"), Expr::jet("b"), Expr::jet("c")};

}  // namespace

TEST_CASE("hyperbolic and first-order conversions") {
  CHECK(kGeneric.to_lpdo() == Op("Dx*Dy + a*Dx + b*Dy + c"));
  CHECK(HyperbolicL::from_lpdo(Op("Dx*Dy + a*Dx + b*Dy + c")) == kGeneric);
  CHECK_THROWS_AS(HyperbolicL::from_lpdo(Op("2*Dx*Dy")), PreconditionError);
  CHECK_THROWS_AS(HyperbolicL::from_lpdo(Op("Dx^2 + Dx*Dy")), PreconditionError);
  CHECK(FirstOrderM::from_lpdo(Op("Dx + q*Dy + r")) == FirstOrderM{E("q"), E("r")});
  CHECK_THROWS_AS(FirstOrderM::from_lpdo(Op("q*Dy + r")), PreconditionError);
}

TEST_CASE("reduce_mixed") {
  CHECK(reduce_mixed(kGeneric, Op("Dx*Dy")) == Op("-a*Dx - b*Dy - c"));
  CHECK(reduce_mixed(kGeneric, Op("Dx + q*Dy + r")) == Op("Dx + q*Dy + r"));
  CHECK(reduce_mixed(kTrivial, Op("Dx^2 + Dx*Dy")) == Op("Dx^2"));

  SUBCASE("confluence: both elimination orders agree") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 6; ++i) {
      LPDO m;
      for (int dx = 0; dx <= 2; ++dx)
        for (int dy = 0; dx + dy <= 3; ++dy)
          if (rng() % 2) m.add_term(dx, dy, Expr::integer(static_cast<long>(rng() % 5) - 2));
      CHECK(reduce_mixed(kGeneric, m, MixedOrder::degree_then_x) ==
            reduce_mixed(kGeneric, m, MixedOrder::degree_then_y));
    }
  }
}

TEST_CASE("bidegree") {
  CHECK(bidegree(kGeneric, Op("Dx + q*Dy + r")) == std::pair(1, 1));
  CHECK(bidegree(kGeneric, Op("Dx^2 + Dx")) == std::pair(2, 0));
  CHECK(bidegree(kGeneric, Op("Dx*Dy")) == std::pair(1, 1));
  CHECK_THROWS_AS(bidegree(kGeneric, LPDO{}), DomainError);
  // an exact right multiple of L reduces to zero
  CHECK_THROWS_AS(bidegree(kGeneric, compose(Op("Dx"), kGeneric.to_lpdo())), DomainError);
}

TEST_CASE("expand") {
  LPDO m = Op("Dx - Dy");
  CHECK(expand(m, LPDO{}, kGeneric) == m);
  CHECK(expand(Op("Dx"), LPDO::identity(), kTrivial) == Op("Dx + Dx*Dy"));

  SUBCASE("reduce_mixed is constant on expansion classes") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 6; ++i) {
      LPDO a;
      for (int dx = 0; dx <= 1; ++dx)
        for (int dy = 0; dy <= 1; ++dy)
          if (rng() % 2)
            a.add_term(dx, dy, Expr::integer(static_cast<long>(rng() % 5) - 2) *
                                   Expr::variable(Var::x).pow(static_cast<int>(rng() % 2)));
      CHECK(reduce_mixed(kGeneric, expand(m, a, kGeneric)) == reduce_mixed(kGeneric, m));
    }
  }
}

TEST_CASE("laplace witnesses") {
  SUBCASE("trivial operator, direction y") {
    DarbouxWitness w = laplace(kTrivial, Var::y);
    CHECK(w.M == Op("Dx"));
    CHECK(w.N == Op("Dx"));
    CHECK(w.L1.to_lpdo() == Op("Dx*Dy"));
    CHECK(w.residuals.empty());
  }
  SUBCASE("generic operator, both directions") {
    for (Var dir : {Var::x, Var::y}) {
      DarbouxWitness w = laplace(kGeneric, dir);
      CHECK(w.exact());
      CHECK(compose(w.N, kGeneric.to_lpdo()) == compose(w.L1.to_lpdo(), w.M));
      CHECK(symbol_of(w.N) == symbol_of(w.M));
    }
    CHECK(laplace(kGeneric, Var::x).M == Op("Dy + a"));
    CHECK(laplace(kGeneric, Var::y).M == Op("Dx + b"));
  }
  SUBCASE("factorable operator with h = 0") {
    // c = ab + a_x makes the x-direction invariant vanish
    HyperbolicL l{E("a"), E("b"), E("a*b + a_x")};
    DarbouxWitness w = laplace(l, Var::x);
    CHECK(compose(w.N, l.to_lpdo()) == compose(w.L1.to_lpdo(), w.M));
  }
}

TEST_CASE("left_scale") {
  FirstOrderM m{E("-1"), E("0")};
  DarbouxWitness w = solve_intertwining(kTrivial, m);
  SUBCASE("scaling by one is the identity") {
    DarbouxWitness s = left_scale(w, Expr::one());
    CHECK(s.M == w.M);
    CHECK(s.N == w.N);
    CHECK(s.L1 == w.L1);
    CHECK(s.exact());
  }
  SUBCASE("scaling by -1") {
    DarbouxWitness s = left_scale(w, E("-1"));
    CHECK(s.M == Op("-Dx + Dy"));
    CHECK(s.exact());
  }
  SUBCASE("scaling by a function preserves the symbol of L1") {
    DarbouxWitness s = left_scale(w, E("x*y + 1"));
    CHECK(s.exact());
    CHECK(symbol_of(s.L1.to_lpdo()) == symbol_of(w.L1.to_lpdo()));
  }
  CHECK_THROWS_AS(left_scale(w, Expr::zero()), PreconditionError);
}

TEST_CASE("compose_dt") {
  FirstOrderM m{E("-1"), E("0")};
  DarbouxWitness w = solve_intertwining(kTrivial, m);
  SUBCASE("identity witness is neutral") {
    DarbouxWitness id{w.L1, LPDO::identity(), LPDO::identity(), w.L1, {}};
    DarbouxWitness c = compose_dt(w, id);
    CHECK(c.M == w.M);
    CHECK(c.L1 == w.L1);
    CHECK(c.exact());
  }
  SUBCASE("chaining mismatch is rejected") {
    DarbouxWitness bad{kGeneric, LPDO::identity(), LPDO::identity(), kGeneric, {}};
    CHECK_THROWS_AS(compose_dt(w, bad), PreconditionError);
  }
  SUBCASE("two Wronskian steps chain to an exact order-two witness") {
    // first step maps Ker(DxDy) into Ker(DxDy); reuse kernel elements there
    FirstOrderM m2 = darboux11(w.L1, apply(w.M, E("x^2")), apply(w.M, E("y^2")));
    DarbouxWitness w2 = solve_intertwining(w.L1, m2);
    CHECK(w2.exact());
    DarbouxWitness c = compose_dt(w, w2);
    CHECK(c.exact());
    CHECK(c.M == compose(w2.M, w.M));
    CHECK(symbol_of(c.N) == symbol_of(c.M));
  }
  SUBCASE("Laplace steps compose to total order two") {
    HyperbolicL l{E("y"), E("x"), E("x*y+1")};
    DarbouxWitness w1 = laplace(l, Var::x);
    DarbouxWitness w2 = laplace(w1.L1, Var::y);
    DarbouxWitness c = compose_dt(w1, w2);
    CHECK(c.exact());
    CHECK(c.M.order() == 2);
  }
}

TEST_CASE("wronskian_mn") {
  CHECK(wronskian_mn(kTrivial, {E("1"), E("x + y")}, 1, 1) == Op("-Dx + Dy"));
  CHECK(wronskian_mn(kTrivial, {E("1")}, 1, 0) == Op("-Dx"));

  SUBCASE("kernel membership is enforced") {
    CHECK_THROWS_AS(wronskian_mn(kTrivial, {E("1"), E("x*y")}, 1, 1), PreconditionError);
    CHECK_THROWS_AS(wronskian_mn(kTrivial, {E("1"), E("x")}, 1, 0), PreconditionError);
  }
  SUBCASE("dependent solutions are rejected") {
    CHECK_THROWS_AS(wronskian_mn(kTrivial, {E("1"), E("2")}, 1, 1), PreconditionError);
  }
  SUBCASE("superposition lies in the kernel of the operator") {
    LPDO w = wronskian_mn(kTrivial, {E("1"), E("x + y")}, 1, 1);
    CHECK(apply(w, E("3*1 - 2*(x+y)")).is_zero());
    CHECK(apply(w, E("1")).is_zero());
  }
  SUBCASE("links to the closed (1,1) construction by the d factor") {
    Expr p1 = E("exp(x)"), p2 = E("x + y^2");
    Expr d = -p1 * p2.diff(Var::y) + p2 * p1.diff(Var::y);
    FirstOrderM m = darboux11(kTrivial, p1, p2);
    CHECK(wronskian_mn(kTrivial, {p1, p2}, 1, 1) == linear_combine({{d, m.to_lpdo()}}));
  }
}

TEST_CASE("darboux11") {
  CHECK(darboux11(kTrivial, E("1"), E("x + y")) == FirstOrderM{E("-1"), E("0")});
  CHECK(darboux11(kTrivial, E("1"), E("x*y")) == FirstOrderM{E("-y/x"), E("0")});

  SUBCASE("existence conditions vanish on the output") {
    FirstOrderM m = darboux11(kTrivial, E("1"), E("x*y"));
    auto [c1, c2] = existence_conditions(kTrivial, m);
    CHECK(c1.is_zero());
    CHECK(c2.is_zero());
  }
  SUBCASE("row operations do not change the operator") {
    Expr p1 = E("1"), p2 = E("x + y");
    FirstOrderM m1 = darboux11(kTrivial, p1, p2);
    FirstOrderM m2 = darboux11(kTrivial, p1, p2 + E("7/3") * p1);
    CHECK(m1 == m2);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(darboux11(kTrivial, E("1"), E("x")), PreconditionError);     // d == 0
    CHECK_THROWS_AS(darboux11(kTrivial, E("x*y"), E("1")), PreconditionError);   // not in kernel
  }
}

TEST_CASE("solve_intertwining") {
  SUBCASE("trivial pair") {
    DarbouxWitness w = solve_intertwining(kTrivial, FirstOrderM{E("-1"), E("0")});
    CHECK(w.N == Op("Dx - Dy"));
    CHECK(w.L1.to_lpdo() == Op("Dx*Dy"));
    CHECK(w.residuals[0].is_zero());
    CHECK(w.residuals[1].is_zero());
  }
  SUBCASE("worked pair with nonzero coefficients") {
    DarbouxWitness w =
        solve_intertwining(HyperbolicL{E("y"), E("x"), E("x*y+1")}, FirstOrderM{E("1"), E("x+y")});
    CHECK(w.exact());
    CHECK(compose(w.N, Op("Dx*Dy + y*Dx + x*Dy + (x*y+1)")) == compose(w.L1.to_lpdo(), w.M));
  }
  SUBCASE("nonexistence shows up in the residuals") {
    DarbouxWitness w = solve_intertwining(kTrivial, FirstOrderM{E("1"), E("x")});
    CHECK(w.residuals[0] == E("-1"));
    CHECK(w.residuals[1].is_zero());
    CHECK(!w.exact());
  }
  CHECK_THROWS_AS(solve_intertwining(kTrivial, FirstOrderM{Expr::zero(), E("x")}),
                  PreconditionError);
}

TEST_CASE("existence_conditions") {
  SUBCASE("trivial pair") {
    auto [c1, c2] = existence_conditions(kTrivial, FirstOrderM{E("-1"), E("0")});
    CHECK(c1.is_zero());
    CHECK(c2.is_zero());
  }
  SUBCASE("worked pair") {
    auto [c1, c2] =
        existence_conditions(HyperbolicL{E("y"), E("x"), E("x*y+1")}, FirstOrderM{E("1"), E("x+y")});
    CHECK(c1.is_zero());
    CHECK(c2.is_zero());
  }
  SUBCASE("obstructed pair") {
    auto [c1, c2] = existence_conditions(kTrivial, FirstOrderM{E("1"), E("x")});
    CHECK(c1 == E("-1"));
    CHECK(c2.is_zero());
  }
}

TEST_CASE("hyperbolic_with_kernel") {
  Expr p1 = E("x + y^2"), p2 = E("y + x^2");
  HyperbolicL l = hyperbolic_with_kernel(p1, p2, E("1"));
  CHECK(apply(l.to_lpdo(), p1).is_zero());
  CHECK(apply(l.to_lpdo(), p2).is_zero());
  CHECK(l.c.is_one());
  CHECK_THROWS_AS(hyperbolic_with_kernel(E("1"), E("x"), E("0")), PreconditionError);
}

TEST_CASE("reconstruct_pair") {
  Expr one = Expr::one();
  SUBCASE("constant z1 matches the trivial pair invariants") {
    GaugeInvariants targets = gauge_invariants(kTrivial, FirstOrderM{E("-1"), E("0")});
    auto [l, m] = reconstruct_pair(targets, E("x + y"), one);
    GaugeInvariants got = gauge_invariants(l, m);
    CHECK(got.q == E("-1"));
    CHECK(got.m.is_zero());
    CHECK(got.h.is_zero());
    CHECK(got.R.is_zero());
    // kernel membership of the constant forces c = 0
    CHECK(apply(l.to_lpdo(), one).is_zero());
  }
  SUBCASE("generic z1 reproduces the full tuple") {
    HyperbolicL base{Expr::zero(), E("-1/x"), Expr::zero()};
    FirstOrderM m0 = darboux11(base, one, E("x*y"));
    GaugeInvariants targets = gauge_invariants(base, m0);
    auto [l, m] = reconstruct_pair(targets, E("x*y"), E("x + 1"));
    CHECK(gauge_invariants(l, m) == targets);
  }
  SUBCASE("degenerate inputs are rejected") {
    GaugeInvariants targets{E("-1"), Expr::zero(), Expr::zero(), Expr::zero()};
    CHECK_THROWS_AS(reconstruct_pair(targets, E("x + y"), E("x + y")), PreconditionError);
    CHECK_THROWS_AS(reconstruct_pair(targets, E("x"), one), PreconditionError);
    CHECK_THROWS_AS(reconstruct_pair(targets, E("x + y"), Expr::zero()), PreconditionError);
  }
}
