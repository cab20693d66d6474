#include "wronsky/verify.hpp"

#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "wronsky/darboux.hpp"
#include "wronsky/invariants.hpp"
#include "wronsky/parse.hpp"

namespace wronsky {

int VerifyReport::failures() const {
  int n = 0;
  for (const VerifyCase& c : cases)
    if (!c.pass) ++n;
  return n;
}

namespace {

// Deterministic generation.  Draws use the raw engine output (modulo), not
// distribution objects, so sequences are identical across standard libraries.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  long range(long lo, long hi) {
    return lo + static_cast<long>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Rat rat() { return Rat(range(-9, 9), range(1, 4)); }

  Rat nonzero_rat() {
    Rat r = rat();
    while (r == 0) r = rat();
    return r;
  }

  /// Sparse polynomial in x, y of total degree <= deg.
  Expr poly(int deg) {
    Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
    Expr out = Expr::zero();
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; i + j <= deg; ++j) {
        if (raw() % 2) continue;
        out = out + Expr::rational(rat()) * x.pow(i) * y.pow(j);
      }
    return out;
  }

  Expr nonzero_poly(int deg) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      Expr p = poly(deg);
      if (!p.is_zero()) return p;
    }
    return Expr::rational(nonzero_rat());
  }

 private:
  std::mt19937_64 engine_;
};

VerifyCase case_zero(std::string name, const Expr& e) {
  return {std::move(name), e.is_zero(), e.str()};
}

VerifyCase case_ok(std::string name, bool pass, std::string detail = "") {
  return {std::move(name), pass, std::move(detail)};
}

std::string tuple_str(const GaugeInvariants& g) {
  return "(" + g.q.str() + ", " + g.m.str() + ", " + g.h.str() + ", " + g.R.str() + ")";
}

std::string tuple_str(const EvolutionInvariants& e) {
  return "(" + e.q.str() + ", " + e.I2.str() + ", " + e.I3.str() + ")";
}

// --- eq7-oracle -------------------------------------------------------------

// Matching residuals against the published polynomial system, generic jets.
VerifyReport suite_eq7(std::uint64_t) {
  VerifyReport rep{"eq7-oracle", {}};
  HyperbolicL L{Expr::jet("a"), Expr::jet("b"), Expr::jet("c")};
  FirstOrderM M{Expr::jet("q"), Expr::jet("r")};
  Expr q = Expr::jet("q");

  DarbouxWitness w = solve_intertwining(L, M);
  auto [e1, e2] = existence_conditions(L, M);
  rep.cases.push_back(case_zero("q * residual(0,1) equals first published condition",
                                w.residuals[0] * q - e1));
  rep.cases.push_back(case_zero("q * residual(0,0) equals second published condition",
                                w.residuals[1] * q - e2));
  Expr n0 = w.N.coeff(0, 0);
  Expr expected = Expr::jet("r") - Expr::jet("q", 1, 0) / q + Expr::jet("q", 0, 1);
  rep.cases.push_back(case_zero("derived N constant term equals r - q_x/q + q_y", n0 - expected));
  bool sym_ok = symbol_of(w.N) == symbol_of(M.to_lpdo()) &&
                symbol_of(w.L1.to_lpdo()) == symbol_of(L.to_lpdo());
  rep.cases.push_back(case_ok("matched symbols agree with the ansatz", sym_ok));
  return rep;
}

// --- thm-dar11 --------------------------------------------------------------

struct KernelInstance {
  std::string name;
  HyperbolicL L;
  Expr psi1, psi2;
};

// Instances with exactly known kernel elements; random ones are produced by
// solving for the operator that annihilates two generated functions.
std::vector<KernelInstance> kernel_instances(Gen& gen, std::size_t want) {
  Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y), one = Expr::one();
  HyperbolicL L0{Expr::zero(), Expr::zero(), Expr::zero()};
  std::vector<KernelInstance> out;
  out.push_back({"DxDy with {1, x+y}", L0, one, x + y});
  out.push_back({"DxDy with {1, x*y}", L0, one, x * y});
  out.push_back({"DxDy with {1, exp(x)+exp(-y)}", L0, one, Expr::exp(x) + Expr::exp(-y)});
  out.push_back({"DxDy with {exp(x), x+y^2}", L0, Expr::exp(x), x + y.pow(2)});
  out.push_back({"b=-1/x with {1, x*y}", HyperbolicL{Expr::zero(), -one / x, Expr::zero()},
                 one, x * y});
  {
    Expr p1 = x + y.pow(2), p2 = y + x.pow(2);
    out.push_back({"solved kernel {x+y^2, y+x^2}", hyperbolic_with_kernel(p1, p2, one), p1, p2});
  }
  {
    Expr p1 = Expr::exp(Expr::integer(2) * x + y), p2 = Expr::exp(x - y);
    out.push_back(
        {"solved kernel {exp(2x+y), exp(x-y)}", hyperbolic_with_kernel(p1, p2, y), p1, p2});
  }
  {
    // A pair built by the completeness reconstruction is itself an instance.
    FirstOrderM m0 = darboux11(L0, one, x + y);
    GaugeInvariants targets = gauge_invariants(L0, m0);
    auto [lr, mr] = reconstruct_pair(targets, x + y, x + one);
    out.push_back({"reconstructed pair kernel {x+1, (x+y)*(x+1)}", lr, x + one,
                   (x + y) * (x + one)});
  }
  int attempts = 0;
  while (out.size() < want && attempts++ < 200) {
    Expr p1 = gen.nonzero_poly(2), p2 = gen.nonzero_poly(2);
    Expr det = p1.diff(Var::x) * p2.diff(Var::y) - p1.diff(Var::y) * p2.diff(Var::x);
    if (det.is_zero()) continue;
    Expr d = -p1 * p2.diff(Var::y) + p2 * p1.diff(Var::y);
    Expr alpha = p1 * p2.diff(Var::x) - p2 * p1.diff(Var::x);
    if (d.is_zero() || alpha.is_zero()) continue;
    HyperbolicL l = hyperbolic_with_kernel(p1, p2, Expr::rational(gen.rat()));
    out.push_back({"generated kernel pair #" + std::to_string(out.size()), l, p1, p2});
  }
  return out;
}

VerifyReport suite_dar11(std::uint64_t seed) {
  VerifyReport rep{"thm-dar11", {}};
  Gen gen(seed);
  for (const KernelInstance& inst : kernel_instances(gen, 11)) {
    FirstOrderM m = darboux11(inst.L, inst.psi1, inst.psi2);
    auto [c1, c2] = existence_conditions(inst.L, m);
    rep.cases.push_back(case_ok(inst.name + ": existence conditions vanish",
                                c1.is_zero() && c2.is_zero(),
                                "(" + c1.str() + ", " + c2.str() + ")"));
    DarbouxWitness w = solve_intertwining(inst.L, m);
    rep.cases.push_back(case_ok(inst.name + ": intertwining residuals vanish", w.exact(),
                                "(" + w.residuals[0].str() + ", " + w.residuals[1].str() + ")"));
  }
  return rep;
}

// --- invariance suites ------------------------------------------------------

struct RandomPair {
  HyperbolicL L;
  FirstOrderM M;
};

RandomPair random_pair(Gen& gen) {
  return RandomPair{HyperbolicL{gen.poly(2), gen.poly(2), gen.poly(2)},
                    FirstOrderM{gen.nonzero_poly(2), gen.poly(2)}};
}

VerifyReport suite_gauge_inv(std::uint64_t seed) {
  VerifyReport rep{"thm-gauge-inv", {}};
  Gen gen(seed);
  for (int i = 0; i < 25; ++i) {
    RandomPair p = random_pair(gen);
    Expr alpha = gen.poly(2);
    GaugeInvariants before = gauge_invariants(p.L, p.M);
    HyperbolicL lg = HyperbolicL::from_lpdo(gauge(p.L.to_lpdo(), alpha));
    FirstOrderM mg = FirstOrderM::from_lpdo(gauge(p.M.to_lpdo(), alpha));
    GaugeInvariants after = gauge_invariants(lg, mg);
    rep.cases.push_back(case_ok("pair #" + std::to_string(i) + " gauge invariants unchanged",
                                before == after, tuple_str(before) + " vs " + tuple_str(after)));
  }
  return rep;
}

VerifyReport suite_evolution_inv(std::uint64_t seed) {
  VerifyReport rep{"thm-evolution-inv", {}};
  Gen gen(seed);
  for (int i = 0; i < 25; ++i) {
    RandomPair p = random_pair(gen);
    Expr alpha = gen.poly(2);
    Expr beta = gen.poly(1);
    EvolutionInvariants before = evolution_invariants(p.L, p.M);
    auto [le, me] = gauged_evolution(p.L, p.M, alpha, beta);
    EvolutionInvariants after = evolution_invariants(le, me);
    rep.cases.push_back(case_ok("pair #" + std::to_string(i) + " evolution invariants unchanged",
                                before == after, tuple_str(before) + " vs " + tuple_str(after)));
  }
  return rep;
}

// --- thm-last-conds: the equivalence chain ----------------------------------

VerifyReport suite_last_conds(std::uint64_t) {
  VerifyReport rep{"thm-last-conds", {}};
  Expr a = Expr::jet("a"), b = Expr::jet("b");
  Expr q = Expr::jet("q"), R = Expr::jet("R"), h = Expr::jet("h"), m = Expr::jet("m");
  Expr I2 = Expr::jet("I2"), I3 = Expr::jet("I3");
  Expr two = Expr::integer(2);

  // Published conditions on generic jets, then the substitutions
  // r = b + qa + R, c = ab - h + a_x, b_y = a_x - m.
  HyperbolicL Lj{a, b, Expr::jet("c")};
  FirstOrderM Mj{q, Expr::jet("r")};
  auto [e71, e72] = existence_conditions(Lj, Mj);
  Substitution s1;
  s1.bind("r", b + q * a + R);
  s1.bind("c", a * b - h + Expr::jet("a", 1, 0));
  Substitution s2;
  s2.bind_jet("b", 0, 1, Expr::jet("a", 1, 0) - m);
  Expr t1 = substitute(substitute(e71, s1), s2);
  Expr t2 = substitute(substitute(e72, s1), s2);
  auto [r1, r2] = reduced_conditions(q, R, h, m);
  rep.cases.push_back(
      case_zero("substituted first condition equals first reduced condition", t1 - r1));
  rep.cases.push_back(case_zero(
      "substituted second condition equals a * first + second reduced condition",
      t2 - (a * r1 + r2)));

  // Express m and h through I2 and I3, reduce to the invariantized pair.
  Expr S = (R / q).diff(Var::x);
  Expr m_of = (I2 + R.diff(Var::y) - S) / two;
  Expr h_of = (I3 - S + R.pow(2) / (two * q)) / two;
  auto [g1, g2] = reduced_conditions(q, R, h_of, m_of);
  auto [c12, c13] = invariant_conditions(EvolutionInvariants{q, I2, I3});
  rep.cases.push_back(case_zero(
      "first reduced condition equals -q^2 times the I2 condition", g1 + q.pow(2) * c12));
  Substitution impose12;
  impose12.bind("I2", -(q.diff(Var::x) / q).diff(Var::y));
  rep.cases.push_back(case_zero(
      "second reduced condition, modulo the I2 condition, equals -q/2 times the I3 condition",
      substitute(g2, impose12) + (q / two) * c13));
  return rep;
}

// --- thm-i30 ----------------------------------------------------------------

VerifyReport suite_i30(std::uint64_t) {
  VerifyReport rep{"thm-i30", {}};
  Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y), one = Expr::one();
  std::vector<std::pair<std::string, Expr>> zs = {
      {"x*y", x * y},
      {"x+y^2", x + y.pow(2)},
      {"y*exp(x)", y * Expr::exp(x)},
      {"x/(1+y)", x / (one + y)},
  };
  std::vector<std::pair<std::string, std::function<Expr(const Expr&)>>> fs = {
      {"id", [](const Expr& z) { return z; }},
      {"z^2", [](const Expr& z) { return z.pow(2); }},
      {"1/z", [](const Expr& z) { return z.pow(-1); }},
      {"exp(z)", [](const Expr& z) { return Expr::exp(z); }},
  };
  for (const auto& [zname, z] : zs) {
    Expr q = -z.diff(Var::x) / z.diff(Var::y);
    for (const auto& [fname, f] : fs) {
      Expr w = f(z);
      Expr residual = i3_residual(q, i30(w));
      rep.cases.push_back(
          case_zero("I3 condition solved by I30(" + fname + ") at z=" + zname, residual));
    }
    bool qinv = true;
    for (std::size_t i = 1; i < fs.size(); ++i) {
      Expr w = fs[i].second(z);
      qinv = qinv && (-w.diff(Var::x) / w.diff(Var::y) == q);
    }
    rep.cases.push_back(case_ok("q is reparametrization invariant at z=" + zname, qinv));
  }
  return rep;
}

// --- thm-simple: invariants via coefficients vs via z ------------------------

VerifyReport suite_simple(std::uint64_t seed) {
  VerifyReport rep{"thm-simple", {}};
  Gen gen(seed);
  Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y), one = Expr::one();

  // Frozen worked instance: kernel {1, x*y} of Dx*Dy - (1/x)*Dy.
  {
    HyperbolicL l{Expr::zero(), -one / x, Expr::zero()};
    FirstOrderM m = darboux11(l, one, x * y);
    EvolutionInvariants ev = evolution_invariants(l, m);
    EvolutionInvariants expected{-y / x, Expr::zero(), one / (Expr::integer(2) * x * y)};
    rep.cases.push_back(case_ok("worked instance z=x*y has invariants (-y/x, 0, 1/(2*x*y))",
                                ev == expected, tuple_str(ev)));
  }

  for (const KernelInstance& inst : kernel_instances(gen, 10)) {
    Expr z = inst.psi2 / inst.psi1;
    Expr zx = z.diff(Var::x), zy = z.diff(Var::y);
    if (zx.is_zero() || zy.is_zero()) continue;
    FirstOrderM m = darboux11(inst.L, inst.psi1, inst.psi2);
    EvolutionInvariants via_pair = evolution_invariants(inst.L, m);
    EvolutionInvariants via_z = wronskian_invariants(z);
    rep.cases.push_back(case_ok(inst.name + ": coefficient route equals z route",
                                via_pair == via_z,
                                tuple_str(via_pair) + " vs " + tuple_str(via_z)));
    auto [c1, c2] = invariant_conditions(via_z);
    rep.cases.push_back(case_ok(inst.name + ": z-route invariants satisfy the conditions",
                                c1.is_zero() && c2.is_zero(),
                                "(" + c1.str() + ", " + c2.str() + ")"));
  }
  return rep;
}

// --- thm-completeness --------------------------------------------------------

VerifyReport suite_completeness(std::uint64_t) {
  VerifyReport rep{"thm-completeness", {}};
  Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y), one = Expr::one();
  HyperbolicL L0{Expr::zero(), Expr::zero(), Expr::zero()};

  struct Instance {
    std::string name;
    HyperbolicL L;
    Expr psi1, psi2;
    Expr z1;
  };
  std::vector<Instance> instances = {
      {"pair over DxDy from {1, x+y}, constant z1", L0, one, x + y, one},
      {"pair over Dx*Dy - (1/x)*Dy from {1, x*y}, z1 = x+1",
       HyperbolicL{Expr::zero(), -one / x, Expr::zero()}, one, x * y, x + one},
      {"solved-kernel pair from {x+y^2, y+x^2}, z1 = y+2",
       hyperbolic_with_kernel(x + y.pow(2), y + x.pow(2), one), x + y.pow(2), y + x.pow(2),
       y + Expr::integer(2)},
  };

  for (const Instance& inst : instances) {
    FirstOrderM m = darboux11(inst.L, inst.psi1, inst.psi2);
    GaugeInvariants targets = gauge_invariants(inst.L, m);
    Expr z = inst.psi2 / inst.psi1;
    auto [lr, mr] = reconstruct_pair(targets, z, inst.z1);
    GaugeInvariants got = gauge_invariants(lr, mr);
    rep.cases.push_back(case_ok(inst.name + ": full gauge tuple (q, m, h, R) matches",
                                got == targets, tuple_str(got) + " vs " + tuple_str(targets)));
    Expr k1 = apply(lr.to_lpdo(), inst.z1);
    Expr k2 = apply(lr.to_lpdo(), z * inst.z1);
    rep.cases.push_back(case_ok(inst.name + ": output pair is built on a genuine kernel pair",
                                k1.is_zero() && k2.is_zero(),
                                "(" + k1.str() + ", " + k2.str() + ")"));
  }
  return rep;
}

// --- laplace-items -----------------------------------------------------------

VerifyReport suite_laplace_items(std::uint64_t) {
  VerifyReport rep{"laplace-items", {}};
  Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y), one = Expr::one();
  Expr a = Expr::jet("a"), b = Expr::jet("b"), c = Expr::jet("c");
  HyperbolicL Lg{a, b, c};

  DarbouxWitness wx = laplace(Lg, Var::x);
  DarbouxWitness wy = laplace(Lg, Var::y);
  rep.cases.push_back(case_ok("generic Laplace witnesses are exact with empty residuals",
                              wx.exact() && wy.exact() && wx.residuals.empty() &&
                                  wy.residuals.empty()));
  LPDO red_xy = reduce_mixed(Lg, compose(wx.M, wy.M));
  LPDO expect_xy = LPDO::term(Expr::jet("b", 0, 1) - c + a * b, 0, 0);
  rep.cases.push_back(case_ok("Mx∘My reduces to the order-zero operator b_y - c + ab",
                              red_xy == expect_xy, red_xy.str()));
  LPDO red_yx = reduce_mixed(Lg, compose(wy.M, wx.M));
  LPDO expect_yx = LPDO::term(Expr::jet("a", 1, 0) - c + a * b, 0, 0);
  rep.cases.push_back(case_ok("My∘Mx reduces to the order-zero operator a_x - c + ab",
                              red_yx == expect_yx, red_yx.str()));

  struct Concrete {
    std::string name;
    HyperbolicL L;
    FirstOrderM M;
  };
  std::vector<Concrete> concrete = {
      {"DxDy with M = Dx - Dy", HyperbolicL{Expr::zero(), Expr::zero(), Expr::zero()},
       FirstOrderM{-one, Expr::zero()}},
      {"(y, x, xy+1) with M = Dx + Dy + (x+y)", HyperbolicL{y, x, x * y + one},
       FirstOrderM{one, x + y}},
  };
  for (const Concrete& inst : concrete) {
    DarbouxWitness cx = laplace(inst.L, Var::x);
    DarbouxWitness cy = laplace(inst.L, Var::y);
    auto dxy = bidegree(inst.L, compose(inst.M.to_lpdo(), cx.M));
    auto dyx = bidegree(inst.L, compose(inst.M.to_lpdo(), cy.M));
    rep.cases.push_back(case_ok(
        inst.name + ": composing with the Laplace operators shifts bi-degree (1,1)->(0,2)/(2,0)",
        dxy == std::make_pair(0, 2) && dyx == std::make_pair(2, 0),
        "(" + std::to_string(dxy.first) + "," + std::to_string(dxy.second) + ") and (" +
            std::to_string(dyx.first) + "," + std::to_string(dyx.second) + ")"));
  }
  return rep;
}

// --- expr-oracle --------------------------------------------------------------

const std::vector<std::string>& oracle_symbols() {
  static const std::vector<std::string> syms = {"a", "b", "q", "r", "z"};
  return syms;
}

AstPtr random_ast(Gen& gen, int depth) {
  Ast node;
  long kind = depth <= 0 ? gen.range(0, 2) : gen.range(0, 9);
  switch (kind) {
    case 0: {
      node.kind = Ast::Kind::number;
      node.number = gen.rat();
      break;
    }
    case 1: {
      node.kind = Ast::Kind::var;
      node.var = gen.raw() % 2 ? Var::x : Var::y;
      break;
    }
    case 2: {
      node.kind = Ast::Kind::jet;
      const auto& syms = oracle_symbols();
      node.jetvar = JetVar{syms[static_cast<std::size_t>(gen.range(0, 4))],
                           static_cast<int>(gen.range(0, 2)), static_cast<int>(gen.range(0, 2))};
      break;
    }
    case 3:
    case 4: {
      node.kind = Ast::Kind::add;
      node.a = random_ast(gen, depth - 1);
      node.b = random_ast(gen, depth - 1);
      break;
    }
    case 5: {
      node.kind = Ast::Kind::sub;
      node.a = random_ast(gen, depth - 1);
      node.b = random_ast(gen, depth - 1);
      break;
    }
    case 6:
    case 7: {
      node.kind = Ast::Kind::mul;
      node.a = random_ast(gen, depth - 1);
      node.b = random_ast(gen, depth - 1);
      break;
    }
    case 8: {
      node.kind = Ast::Kind::div;
      node.a = random_ast(gen, depth - 1);
      node.b = random_ast(gen, depth - 1);
      break;
    }
    default: {
      node.kind = Ast::Kind::pow;
      node.a = random_ast(gen, depth - 1);
      node.exponent = static_cast<int>(gen.range(-2, 3));
      break;
    }
  }
  return std::make_shared<Ast>(std::move(node));
}

void collect_ast_jets(const Ast& ast, std::set<JetVar>& out) {
  if (ast.kind == Ast::Kind::jet) out.insert(ast.jetvar);
  if (ast.a) collect_ast_jets(*ast.a, out);
  if (ast.b) collect_ast_jets(*ast.b, out);
}

Rat rat_power(const Rat& base, int k) {
  Rat out = 1;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) out *= base;
  if (k < 0) out = 1 / out;
  return out;
}

// Direct tree evaluation: the independent oracle against the normalizing
// kernel.  Returns nothing at poles.
std::optional<Rat> eval_ast(const Ast& ast, const EvalPoint& p) {
  switch (ast.kind) {
    case Ast::Kind::number:
      return ast.number;
    case Ast::Kind::var:
      return ast.var == Var::x ? p.x : p.y;
    case Ast::Kind::jet: {
      auto it = p.jets.find(ast.jetvar);
      if (it == p.jets.end()) return std::nullopt;
      return it->second;
    }
    case Ast::Kind::neg: {
      auto v = eval_ast(*ast.a, p);
      if (!v) return std::nullopt;
      return Rat(-*v);
    }
    case Ast::Kind::add:
    case Ast::Kind::sub:
    case Ast::Kind::mul:
    case Ast::Kind::div: {
      auto va = eval_ast(*ast.a, p), vb = eval_ast(*ast.b, p);
      if (!va || !vb) return std::nullopt;
      switch (ast.kind) {
        case Ast::Kind::add:
          return Rat(*va + *vb);
        case Ast::Kind::sub:
          return Rat(*va - *vb);
        case Ast::Kind::mul:
          return Rat(*va * *vb);
        default:
          if (*vb == 0) return std::nullopt;
          return Rat(*va / *vb);
      }
    }
    case Ast::Kind::pow: {
      auto v = eval_ast(*ast.a, p);
      if (!v) return std::nullopt;
      if (ast.exponent < 0 && *v == 0) return std::nullopt;
      return rat_power(*v, ast.exponent);
    }
    default:
      return std::nullopt;
  }
}

VerifyReport suite_expr_oracle(std::uint64_t seed) {
  VerifyReport rep{"expr-oracle", {}};
  Gen gen(seed);
  int made = 0;
  int guard = 0;
  while (made < 200 && guard++ < 4000) {
    AstPtr ast = random_ast(gen, 4);
    Expr e;
    try {
      e = lower(*ast);
    } catch (const DomainError&) {
      continue;  // structurally zero divisor somewhere in the tree
    }

    std::set<JetVar> jets;
    collect_ast_jets(*ast, jets);
    std::optional<Rat> want, got;
    bool evaluated = false;
    for (int attempt = 0; attempt < 6 && !evaluated; ++attempt) {
      EvalPoint p{gen.rat(), gen.rat(), {}};
      for (const JetVar& v : jets) p.jets[v] = gen.rat();
      want = eval_ast(*ast, p);
      if (!want) continue;  // pole of the raw tree at this point
      got = e.eval(p);
      evaluated = true;
    }
    if (!evaluated) continue;

    ++made;
    std::ostringstream name;
    name << "random expression #" << made;
    bool values_match = got.has_value() && *got == *want;
    bool idempotent = normalize(e) == e;
    bool round_trip = parse_expr(e.str()) == e;
    std::string detail;
    if (!values_match) detail = "evaluation mismatch on " + e.str();
    if (!idempotent) detail += " normalize not idempotent";
    if (!round_trip) detail += " print/parse round trip failed: " + e.str();
    rep.cases.push_back(case_ok(name.str(), values_match && idempotent && round_trip, detail));
  }
  return rep;
}

using SuiteFn = VerifyReport (*)(std::uint64_t);

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> table = {
      {"eq7-oracle", suite_eq7},
      {"thm-dar11", suite_dar11},
      {"thm-gauge-inv", suite_gauge_inv},
      {"thm-evolution-inv", suite_evolution_inv},
      {"thm-last-conds", suite_last_conds},
      {"thm-i30", suite_i30},
      {"thm-simple", suite_simple},
      {"thm-completeness", suite_completeness},
      {"laplace-items", suite_laplace_items},
      {"expr-oracle", suite_expr_oracle},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& verify_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : suites()) out.push_back(id);
    return out;
  }();
  return ids;
}

VerifyReport run_verify(const std::string& id, std::uint64_t seed) {
  auto it = suites().find(id);
  if (it == suites().end()) throw PreconditionError("unknown verification id: " + id);
  return it->second(seed);
}

}  // namespace wronsky
