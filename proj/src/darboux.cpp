#include "wronsky/darboux.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include "wronsky/invariants.hpp"

namespace wronsky {

LPDO HyperbolicL::to_lpdo() const {
  LPDO op = LPDO::term(Expr::one(), 1, 1);
  op.add_term(1, 0, a);
  op.add_term(0, 1, b);
  op.add_term(0, 0, c);
  return op;
}

HyperbolicL HyperbolicL::from_lpdo(const LPDO& op) {
  for (const auto& [idx, c] : op.terms())
    if (idx.dx > 1 || idx.dy > 1)
      throw PreconditionError("operator is not of hyperbolic form");
  if (!op.coeff(1, 1).is_one())
    throw PreconditionError("operator is not of hyperbolic form: Dx*Dy coefficient must be 1");
  return HyperbolicL{op.coeff(1, 0), op.coeff(0, 1), op.coeff(0, 0)};
}

bool operator==(const HyperbolicL& a, const HyperbolicL& b) {
  return a.a == b.a && a.b == b.b && a.c == b.c;
}
bool operator!=(const HyperbolicL& a, const HyperbolicL& b) { return !(a == b); }

LPDO FirstOrderM::to_lpdo() const {
  LPDO op = LPDO::dx();
  op.add_term(0, 1, q);
  op.add_term(0, 0, r);
  return op;
}

FirstOrderM FirstOrderM::from_lpdo(const LPDO& op) {
  for (const auto& [idx, c] : op.terms())
    if (idx.dx + idx.dy > 1) throw PreconditionError("operator is not first order");
  if (!op.coeff(1, 0).is_one())
    throw PreconditionError("operator is not of the form Dx + q*Dy + r");
  return FirstOrderM{op.coeff(0, 1), op.coeff(0, 0)};
}

bool operator==(const FirstOrderM& a, const FirstOrderM& b) {
  return a.q == b.q && a.r == b.r;
}
bool operator!=(const FirstOrderM& a, const FirstOrderM& b) { return !(a == b); }

bool DarbouxWitness::exact() const {
  for (const auto& r : residuals)
    if (!r.is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------

LPDO reduce_mixed(const HyperbolicL& L, const LPDO& M, MixedOrder order) {
  LPDO lop = L.to_lpdo();
  LPDO cur = M;
  for (;;) {
    std::optional<DiffIndex> pick;
    for (const auto& [idx, c] : cur.terms()) {
      if (idx.dx < 1 || idx.dy < 1) continue;
      if (!pick) {
        pick = idx;
        continue;
      }
      int ta = idx.dx + idx.dy, tb = pick->dx + pick->dy;
      bool better;
      if (ta != tb)
        better = ta > tb;
      else if (order == MixedOrder::degree_then_x)
        better = idx.dx > pick->dx;
      else
        better = idx.dy > pick->dy;
      if (better) pick = idx;
    }
    if (!pick) return cur;
    Expr c = cur.coeff(pick->dx, pick->dy);
    cur = cur - compose(LPDO::term(c, pick->dx - 1, pick->dy - 1), lop);
  }
}

std::pair<int, int> bidegree(const HyperbolicL& L, const LPDO& M) {
  LPDO reduced = reduce_mixed(L, M);
  if (reduced.is_zero()) throw DomainError("bi-degree of the zero operator");
  int mx = 0, my = 0;
  for (const auto& [idx, c] : reduced.terms()) {
    mx = std::max(mx, idx.dx);
    my = std::max(my, idx.dy);
  }
  return {mx, my};
}

LPDO expand(const LPDO& M, const LPDO& A, const HyperbolicL& L) {
  return M + compose(A, L.to_lpdo());
}

// --- generic coefficient matching ------------------------------------------

namespace {

constexpr char kUnknownPrefix = '$';

std::set<std::string> unknowns_in(const Expr& e) {
  std::set<std::string> out;
  for (const JetVar& v : e.jets())
    if (!v.symbol.empty() && v.symbol[0] == kUnknownPrefix) out.insert(v.symbol);
  return out;
}

// value = constant + sum coeff[u] * u, coefficients nonzero.
struct LinearForm {
  std::map<std::string, Expr> coeff;
  Expr constant;
};

struct CoefficientSolve {
  // Triangular assignments in pivot order: each form references only
  // unknowns pivoted later or left free.
  std::vector<std::pair<std::string, LinearForm>> assignments;
  std::set<std::string> free;
  // Unknown-free equations after elimination, in descending (order, dx)
  // index order; equal to the original coefficient equations evaluated at
  // the solution.
  std::vector<std::pair<DiffIndex, Expr>> leftover;

  std::map<std::string, Expr> resolve(const std::map<std::string, Expr>& defaults) const {
    std::map<std::string, Expr> values = defaults;
    for (auto it = assignments.rbegin(); it != assignments.rend(); ++it) {
      Expr v = it->second.constant;
      for (const auto& [u, k] : it->second.coeff) {
        auto found = values.find(u);
        if (found == values.end())
          throw std::logic_error("unresolved unknown " + u + " in coefficient solve");
        v = v + k * found->second;
      }
      values[it->first] = v;
    }
    return values;
  }
};

// Extracts the linear form of a coefficient equation in the $-unknowns.
// Every equation arising from the matching is linear: the unknowns sit in
// left-hand composition factors and are never differentiated.
LinearForm linear_form(const Expr& eq) {
  LinearForm f;
  std::set<std::string> names = unknowns_in(eq);
  Substitution zero_all;
  for (const auto& u : names) zero_all.bind(u, Expr::zero());
  f.constant = substitute(eq, zero_all);
  Expr rebuilt = f.constant;
  for (const auto& u : names) {
    Substitution s;
    for (const auto& v : names) s.bind(v, u == v ? Expr::one() : Expr::zero());
    Expr k = substitute(eq, s) - f.constant;
    if (!k.is_zero()) {
      rebuilt = rebuilt + k * Expr::jet(u);
      f.coeff.emplace(u, k);
    }
  }
  if (!(eq - rebuilt).is_zero())
    throw std::logic_error("coefficient equation is not linear in the unknowns");
  return f;
}

// Gaussian elimination over the expression field for the coefficient
// equations "delta == 0".  Deterministic pivot choice: equations with the
// fewest unknowns first (ties by descending index), within an equation a
// rational pivot coefficient is preferred, then the lexicographically
// smallest unknown.
CoefficientSolve solve_coefficient_equations(const LPDO& delta) {
  struct Eq {
    DiffIndex idx;
    LinearForm form;
    bool used = false;
  };
  std::vector<Eq> eqs;
  for (const auto& [idx, c] : delta.terms()) eqs.push_back({idx, linear_form(c), false});
  std::sort(eqs.begin(), eqs.end(), [](const Eq& a, const Eq& b) {
    int ta = a.idx.dx + a.idx.dy, tb = b.idx.dx + b.idx.dy;
    if (ta != tb) return ta > tb;
    return a.idx.dx > b.idx.dx;
  });

  std::set<std::string> seen;
  for (const Eq& e : eqs)
    for (const auto& [u, k] : e.form.coeff) seen.insert(u);

  CoefficientSolve out;
  for (;;) {
    Eq* pick = nullptr;
    for (Eq& e : eqs) {
      if (e.used || e.form.coeff.empty()) continue;
      if (!pick || e.form.coeff.size() < pick->form.coeff.size()) pick = &e;
    }
    if (!pick) break;
    pick->used = true;

    const std::string* pivot = nullptr;
    for (const auto& [u, k] : pick->form.coeff) {
      if (k.is_rational()) {
        pivot = &u;
        break;
      }
    }
    if (!pivot) pivot = &pick->form.coeff.begin()->first;

    // u = -(constant + sum others)/k
    Expr k = pick->form.coeff.at(*pivot);
    LinearForm value;
    value.constant = -pick->form.constant / k;
    for (const auto& [u, c] : pick->form.coeff)
      if (u != *pivot) value.coeff.emplace(u, -c / k);

    std::string name = *pivot;
    for (Eq& e : eqs) {
      if (&e == pick) continue;
      auto it = e.form.coeff.find(name);
      if (it == e.form.coeff.end()) continue;
      Expr factor = it->second;
      e.form.coeff.erase(it);
      e.form.constant = e.form.constant + factor * value.constant;
      for (const auto& [u, c] : value.coeff) {
        Expr sum = factor * c;
        auto jt = e.form.coeff.find(u);
        if (jt != e.form.coeff.end()) sum = sum + jt->second;
        if (sum.is_zero()) {
          if (jt != e.form.coeff.end()) e.form.coeff.erase(jt);
        } else if (jt != e.form.coeff.end()) {
          jt->second = sum;
        } else {
          e.form.coeff.emplace(u, sum);
        }
      }
    }
    out.assignments.emplace_back(std::move(name), std::move(value));
  }

  for (const Eq& e : eqs)
    if (!e.used && !e.form.constant.is_zero())
      out.leftover.emplace_back(e.idx, e.form.constant);
  for (const auto& u : seen) {
    bool pivoted = false;
    for (const auto& [n, f] : out.assignments) pivoted |= (n == u);
    if (!pivoted) out.free.insert(u);
  }
  return out;
}

Expr resolve(const Expr& e, const std::map<std::string, Expr>& solved) {
  Substitution s;
  for (const auto& [name, value] : solved) s.bind(name, value);
  return substitute(e, s);
}

}  // namespace

DarbouxWitness solve_intertwining(const HyperbolicL& L, const FirstOrderM& M) {
  if (M.q.is_zero())
    throw PreconditionError("solve_intertwining requires q not identically zero");
  LPDO lop = L.to_lpdo();
  LPDO mop = M.to_lpdo();

  LPDO n_ansatz;
  n_ansatz.add_term(1, 0, Expr::jet("$n2"));
  n_ansatz.add_term(0, 1, Expr::jet("$n1"));
  n_ansatz.add_term(0, 0, Expr::jet("$n0"));
  LPDO l1_ansatz = LPDO::term(Expr::one(), 1, 1);
  l1_ansatz.add_term(1, 0, Expr::jet("$a1"));
  l1_ansatz.add_term(0, 1, Expr::jet("$b1"));
  l1_ansatz.add_term(0, 0, Expr::jet("$c1"));

  LPDO delta = compose(n_ansatz, lop) - compose(l1_ansatz, mop);
  auto solve = solve_coefficient_equations(delta);
  if (!solve.free.empty())
    throw std::logic_error("intertwining ansatz left unknowns unsolved");
  auto values = solve.resolve({});

  LPDO n_op;
  for (const auto& [idx, c] : n_ansatz.terms()) n_op.add_term(idx.dx, idx.dy, resolve(c, values));
  HyperbolicL l1{values.at("$a1"), values.at("$b1"), values.at("$c1")};

  // The derived constant term must agree with N = M - (ln q)_x + q_y.
  Expr expected_n0 = M.r - M.q.diff(Var::x) / M.q + M.q.diff(Var::y);
  if (values.at("$n0") != expected_n0)
    throw std::logic_error("matched N deviates from M - (ln q)_x + q_y");

  LPDO check = compose(n_op, lop) - compose(l1.to_lpdo(), mop);
  std::vector<Expr> residuals{check.coeff(0, 1), check.coeff(0, 0)};
  for (const auto& [idx, c] : check.terms())
    if (!(idx == DiffIndex{0, 1}) && !(idx == DiffIndex{0, 0}))
      throw std::logic_error("unexpected nonzero matched coefficient");
  return DarbouxWitness{L, mop, n_op, l1, residuals};
}

DarbouxWitness laplace(const HyperbolicL& L, Var direction) {
  LPDO lop = L.to_lpdo();
  LPDO mop = direction == Var::x ? LPDO::dy() + LPDO::term(L.a, 0, 0)
                                 : LPDO::dx() + LPDO::term(L.b, 0, 0);

  LPDO n_ansatz;
  if (direction == Var::x)
    n_ansatz.add_term(0, 1, Expr::jet("$n1"));
  else
    n_ansatz.add_term(1, 0, Expr::jet("$n1"));
  n_ansatz.add_term(0, 0, Expr::jet("$n0"));
  LPDO l1_ansatz = LPDO::term(Expr::one(), 1, 1);
  l1_ansatz.add_term(1, 0, Expr::jet("$a1"));
  l1_ansatz.add_term(0, 1, Expr::jet("$b1"));
  l1_ansatz.add_term(0, 0, Expr::jet("$c1"));

  LPDO delta = compose(n_ansatz, lop) - compose(l1_ansatz, mop);
  auto solve = solve_coefficient_equations(delta);

  // Degenerate Laplace invariant: the matching leaves the constant term of N
  // free (the transformation is not unique there); take N = M.
  std::map<std::string, Expr> defaults;
  for (const auto& u : solve.free) {
    if (u != "$n0") throw std::logic_error("laplace matching left " + u + " unsolved");
    defaults.emplace("$n0", direction == Var::x ? L.a : L.b);
  }
  auto values = solve.resolve(defaults);

  LPDO n_op;
  for (const auto& [idx, c] : n_ansatz.terms()) n_op.add_term(idx.dx, idx.dy, resolve(c, values));
  HyperbolicL l1{values.at("$a1"), values.at("$b1"), values.at("$c1")};

  LPDO check = compose(n_op, lop) - compose(l1.to_lpdo(), mop);
  if (!check.is_zero()) throw std::logic_error("laplace witness fails the intertwining relation");
  return DarbouxWitness{L, mop, n_op, l1, {}};
}

DarbouxWitness left_scale(const DarbouxWitness& w, const Expr& p) {
  if (p.is_zero()) throw PreconditionError("left_scale requires an invertible p");
  LPDO m2 = p * w.M;
  LPDO n2 = p * w.N;
  HyperbolicL l12 = HyperbolicL::from_lpdo(conjugate(w.L1.to_lpdo(), p));
  LPDO check = compose(n2, w.L.to_lpdo()) - compose(l12.to_lpdo(), m2);
  std::vector<Expr> residuals;
  for (const auto& [idx, c] : check.terms()) residuals.push_back(c);
  return DarbouxWitness{w.L, m2, n2, l12, residuals};
}

DarbouxWitness compose_dt(const DarbouxWitness& w1, const DarbouxWitness& w2) {
  if (w2.L != w1.L1)
    throw PreconditionError("compose_dt chaining mismatch: w2.L must equal w1.L1");
  LPDO m = compose(w2.M, w1.M);
  LPDO n = compose(w2.N, w1.N);
  LPDO check = compose(n, w1.L.to_lpdo()) - compose(w2.L1.to_lpdo(), m);
  std::vector<Expr> residuals;
  for (const auto& [idx, c] : check.terms()) residuals.push_back(c);
  return DarbouxWitness{w1.L, m, n, w2.L1, residuals};
}

// ---------------------------------------------------------------------------

namespace {

void require_kernel_member(const HyperbolicL& L, const Expr& psi, const char* who) {
  ZeroTest t = apply(L.to_lpdo(), psi).test_zero();
  if (t.zero) return;
  std::string msg = std::string(who) + ": function is not in the kernel of L";
  if (t.unreduced_kernels) msg += " (zero test inconclusive: unreduced kernels present)";
  throw PreconditionError(msg);
}

Expr determinant(const std::vector<std::vector<Expr>>& m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Expr out = Expr::zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    minor.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Expr> row;
      row.reserve(n - 1);
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    Expr cof = m[0][j] * determinant(minor);
    out = (j % 2 == 0) ? out + cof : out - cof;
  }
  return out;
}

}  // namespace

LPDO wronskian_mn(const HyperbolicL& L, const std::vector<Expr>& solutions, int m, int n) {
  if (m < 0 || n < 0 || m + n <= 0) throw PreconditionError("wronskian_mn needs m+n >= 1");
  if (static_cast<int>(solutions.size()) != m + n)
    throw PreconditionError("wronskian_mn needs exactly m+n kernel elements");
  for (const Expr& psi : solutions) require_kernel_member(L, psi, "wronskian_mn");

  // Column operators: 1, Dx, ..., Dx^m, Dy, ..., Dy^n.
  std::vector<DiffIndex> columns;
  columns.push_back({0, 0});
  for (int i = 1; i <= m; ++i) columns.push_back({i, 0});
  for (int j = 1; j <= n; ++j) columns.push_back({0, j});

  std::vector<std::vector<Expr>> rows;
  rows.reserve(solutions.size());
  for (const Expr& psi : solutions) {
    std::vector<Expr> row;
    row.reserve(columns.size());
    for (DiffIndex idx : columns) row.push_back(psi.diff(Var::x, idx.dx).diff(Var::y, idx.dy));
    rows.push_back(std::move(row));
  }

  LPDO out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    std::vector<std::vector<Expr>> minor;
    minor.reserve(rows.size());
    for (const auto& row : rows) {
      std::vector<Expr> r;
      r.reserve(row.size() - 1);
      for (std::size_t k = 0; k < row.size(); ++k)
        if (k != j) r.push_back(row[k]);
      minor.push_back(std::move(r));
    }
    Expr det = determinant(minor);
    if (j % 2 == 1) det = -det;
    out.add_term(columns[j].dx, columns[j].dy, det);
  }
  // Independence proxy: if every first-row cofactor vanishes the solution
  // rows are dependent and no operator is defined.
  if (out.is_zero())
    throw PreconditionError("wronskian_mn: degenerate minors, solutions are dependent");
  return out;
}

FirstOrderM darboux11(const HyperbolicL& L, const Expr& psi1, const Expr& psi2) {
  require_kernel_member(L, psi1, "darboux11");
  require_kernel_member(L, psi2, "darboux11");
  Expr p1x = psi1.diff(Var::x), p1y = psi1.diff(Var::y);
  Expr p2x = psi2.diff(Var::x), p2y = psi2.diff(Var::y);
  Expr d = -psi1 * p2y + psi2 * p1y;
  if (d.is_zero())
    throw PreconditionError("darboux11: d = -psi1*psi2_y + psi2*psi1_y is identically zero");
  Expr alpha = psi1 * p2x - psi2 * p1x;
  Expr beta = -p2x * p1y + p2y * p1x;
  return FirstOrderM{alpha / d, beta / d};
}

std::pair<Expr, Expr> existence_conditions(const HyperbolicL& L, const FirstOrderM& M) {
  const Expr &a = L.a, &b = L.b, &c = L.c, &q = M.q, &r = M.r;
  Expr qx = q.diff(Var::x), qy = q.diff(Var::y), qxy = qx.diff(Var::y);
  Expr rx = r.diff(Var::x), ry = r.diff(Var::y), rxy = rx.diff(Var::y);
  Expr ax = a.diff(Var::x), ay = a.diff(Var::y);
  Expr bx = b.diff(Var::x), by = b.diff(Var::y);
  Expr cx = c.diff(Var::x), cy = c.diff(Var::y);

  Expr first = -q * rx + q.pow(2) * ry + qx * r - b * qx + bx * q +
               q.pow(2) * (by - a * qy - ax) - q.pow(3) * ay + qy * qx - qxy * q;
  Expr second = -c * qx + (c - a * r) * qy * q + (a * r + ry) * qx +
                (cy - r * ay) * q.pow(2) +
                (r * ry - a * rx - ry * b - rxy - r * ax + cx) * q;
  return {first, second};
}

HyperbolicL hyperbolic_with_kernel(const Expr& psi1, const Expr& psi2, const Expr& c0) {
  Expr p1x = psi1.diff(Var::x), p1y = psi1.diff(Var::y);
  Expr p2x = psi2.diff(Var::x), p2y = psi2.diff(Var::y);
  Expr det = p1x * p2y - p1y * p2x;
  if (det.is_zero())
    throw PreconditionError("hyperbolic_with_kernel: singular system for a and b");
  Expr rhs1 = -(psi1.diff(Var::x).diff(Var::y) + c0 * psi1);
  Expr rhs2 = -(psi2.diff(Var::x).diff(Var::y) + c0 * psi2);
  Expr a = (rhs1 * p2y - rhs2 * p1y) / det;
  Expr b = (p1x * rhs2 - p2x * rhs1) / det;
  return HyperbolicL{a, b, c0};
}

std::pair<HyperbolicL, FirstOrderM> reconstruct_pair(const GaugeInvariants& targets,
                                                     const Expr& z, const Expr& z1) {
  Expr zx = z.diff(Var::x), zy = z.diff(Var::y);
  if (zx.is_zero() || zy.is_zero())
    throw PreconditionError("reconstruct_pair: z must depend on both x and y");
  if (z1.is_zero()) throw PreconditionError("reconstruct_pair: z1 must not be zero");
  Expr z1x = z1.diff(Var::x), z1y = z1.diff(Var::y);

  HyperbolicL l;
  if (z1x.is_zero() && z1y.is_zero()) {
    // Constant z1: kernel membership of z1 forces c = 0, and the one
    // remaining kernel equation z_xy + a z_x + b z_y = 0 leaves a free;
    // matching the target R closes it.
    Expr zxy = zx.diff(Var::y);
    Expr a = (targets.R * zy - zxy) / (Expr::integer(2) * zx);
    Expr b = -(zxy + a * zx) / zy;
    l = HyperbolicL{a, b, Expr::zero()};
  } else {
    Expr jac = -zx * z1y + zy * z1x;
    if (jac.is_zero())
      throw PreconditionError("reconstruct_pair: degenerate pair, -z_x*z1_y + z_y*z1_x is zero");
    Expr c0 = Expr::jet("$c0");
    HyperbolicL lc = hyperbolic_with_kernel(z1, z * z1, c0);
    FirstOrderM mc = darboux11(lc, z1, z * z1);
    Expr Rc = mc.r - lc.b - mc.q * lc.a;  // linear in $c0
    Substitution at0, at1;
    at0.bind("$c0", Expr::zero());
    at1.bind("$c0", Expr::one());
    Expr r0 = substitute(Rc, at0);
    Expr u = substitute(Rc, at1) - r0;
    if (u.is_zero())
      throw PreconditionError("reconstruct_pair: R does not depend on c, cannot match targets");
    Expr cval = (targets.R - r0) / u;
    Substitution fix;
    fix.bind("$c0", cval);
    l = HyperbolicL{substitute(lc.a, fix), substitute(lc.b, fix), cval};
  }

  FirstOrderM m = darboux11(l, z1, z * z1);
  Expr got_r = m.r - l.b - m.q * l.a;
  if (got_r != targets.R)
    throw std::logic_error("reconstruct_pair failed to match the target R invariant");
  return {l, m};
}

}  // namespace wronsky
