#include "wronsky/invariants.hpp"

namespace wronsky {

bool operator==(const GaugeInvariants& a, const GaugeInvariants& b) {
  return a.q == b.q && a.m == b.m && a.h == b.h && a.R == b.R;
}
bool operator!=(const GaugeInvariants& a, const GaugeInvariants& b) { return !(a == b); }

bool operator==(const EvolutionInvariants& a, const EvolutionInvariants& b) {
  return a.q == b.q && a.I2 == b.I2 && a.I3 == b.I3;
}
bool operator!=(const EvolutionInvariants& a, const EvolutionInvariants& b) {
  return !(a == b);
}

GaugeInvariants gauge_invariants(const HyperbolicL& L, const FirstOrderM& M) {
  Expr m = L.a.diff(Var::x) - L.b.diff(Var::y);
  Expr h = L.a * L.b - L.c + L.a.diff(Var::x);
  Expr R = M.r - L.b - M.q * L.a;
  return GaugeInvariants{M.q, m, h, R};
}

std::pair<Expr, Expr> laplace_invariants(const HyperbolicL& L) {
  Expr h = L.a * L.b - L.c + L.a.diff(Var::x);
  Expr k = L.a * L.b - L.c + L.b.diff(Var::y);
  return {h, k};
}

std::pair<HyperbolicL, FirstOrderM> gauged_evolution(const HyperbolicL& L, const FirstOrderM& M,
                                                     const Expr& alpha, const Expr& beta) {
  LPDO lg = gauge(L.to_lpdo(), alpha);
  LPDO mg = gauge(M.to_lpdo(), alpha);
  HyperbolicL l1 = HyperbolicL::from_lpdo(lg + beta * mg);
  FirstOrderM m1 = FirstOrderM::from_lpdo(mg);
  return {l1, m1};
}

EvolutionInvariants evolution_invariants(const HyperbolicL& L, const FirstOrderM& M) {
  if (M.q.is_zero())
    throw PreconditionError("evolution invariants require q not identically zero");
  GaugeInvariants g = gauge_invariants(L, M);
  Expr s = (g.R / g.q).diff(Var::x);
  Expr two = Expr::integer(2);
  Expr i2 = two * g.m - g.R.diff(Var::y) + s;
  Expr i3 = two * g.h + s - g.R.pow(2) / (two * g.q);
  return EvolutionInvariants{g.q, i2, i3};
}

Expr i3_residual(const Expr& q, const Expr& I3) {
  if (q.is_zero()) throw PreconditionError("i3_residual requires q not identically zero");
  Expr qx = q.diff(Var::x), qy = q.diff(Var::y);
  Expr Qx = qx / q;
  Expr Qxy = Qx.diff(Var::y);
  Expr Qxxy = Qxy.diff(Var::x);
  return I3.diff(Var::x) + q * I3.diff(Var::y) + (qy - qx / q) * I3 - Qx * Qxy + Qxxy;
}

std::pair<Expr, Expr> invariant_conditions(const EvolutionInvariants& inv) {
  if (inv.q.is_zero())
    throw PreconditionError("invariant conditions require q not identically zero");
  Expr Qxy = (inv.q.diff(Var::x) / inv.q).diff(Var::y);
  return {inv.I2 + Qxy, i3_residual(inv.q, inv.I3)};
}

std::pair<Expr, Expr> reduced_conditions(const Expr& q, const Expr& R, const Expr& h,
                                         const Expr& m) {
  Expr qx = q.diff(Var::x), qy = q.diff(Var::y), qxy = qx.diff(Var::y);
  Expr Rx = R.diff(Var::x), Ry = R.diff(Var::y), Rxy = Rx.diff(Var::y);
  Expr hx = h.diff(Var::x), hy = h.diff(Var::y);
  Expr mx = m.diff(Var::x);
  Expr two = Expr::integer(2);

  Expr first = -two * q.pow(2) * m + q.pow(2) * Ry + qx * R + qy * qx - q * Rx - qxy * q;
  Expr second = qx * h - q * hx - q.pow(2) * hy - qx * m + qx * Ry + q * mx - q * Rxy -
                qy * q * h - q * R * m + q * R * Ry;
  return {first, second};
}

Expr i30(const Expr& z) {
  Expr zx = z.diff(Var::x), zy = z.diff(Var::y);
  if (zx.is_zero() || zy.is_zero())
    throw PreconditionError("i30 requires z with nonzero z_x and z_y");
  Expr zxx = zx.diff(Var::x);
  Expr zxy = zx.diff(Var::y);
  Expr zxxy = zxy.diff(Var::x);
  return -zxxy / zx + zxx * zxy / zx.pow(2) + zxy.pow(2) / (Expr::integer(2) * zx * zy);
}

EvolutionInvariants wronskian_invariants(const Expr& z) {
  Expr zx = z.diff(Var::x), zy = z.diff(Var::y);
  if (zx.is_zero()) throw PreconditionError("wronskian_invariants: z is constant in x");
  if (zy.is_zero()) throw PreconditionError("wronskian_invariants: z is constant in y");
  Expr q = -zx / zy;
  Expr zxy = zx.diff(Var::y);
  if (zxy.is_zero()) return EvolutionInvariants{q, Expr::zero(), Expr::zero()};
  Expr A = zxy / zx;
  Expr B = zxy / zy;
  Expr Ax = A.diff(Var::x);
  Expr i2 = B.diff(Var::y) - Ax;
  Expr i3 = -Ax + A * B / Expr::integer(2);
  return EvolutionInvariants{q, i2, i3};
}

}  // namespace wronsky
