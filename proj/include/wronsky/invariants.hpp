#pragma once

#include <utility>

#include "wronsky/darboux.hpp"

namespace wronsky {

/// Generating invariants of a pair (L, M) under simultaneous gauge
/// conjugation by exp(alpha):
///   q,  m = a_x - b_y,  h = ab - c + a_x,  R = r - b - qa.
struct GaugeInvariants {
  Expr q, m, h, R;
};

bool operator==(const GaugeInvariants& a, const GaugeInvariants& b);
bool operator!=(const GaugeInvariants& a, const GaugeInvariants& b);

/// Generating invariants under gauged evolution:
///   I1 = q,  I2 = 2m - R_y + (R/q)_x,  I3 = 2h + (R/q)_x - R^2/(2q).
struct EvolutionInvariants {
  Expr q, I2, I3;
};

bool operator==(const EvolutionInvariants& a, const EvolutionInvariants& b);
bool operator!=(const EvolutionInvariants& a, const EvolutionInvariants& b);

GaugeInvariants gauge_invariants(const HyperbolicL& L, const FirstOrderM& M);

/// h = ab - c + a_x and k = ab - c + b_y; m = h - k.
std::pair<Expr, Expr> laplace_invariants(const HyperbolicL& L);

/// (L, M) -> (gauge(L, alpha) + beta * gauge(M, alpha), gauge(M, alpha)).
/// Preserves existence of a Darboux transformation for the pair.
std::pair<HyperbolicL, FirstOrderM> gauged_evolution(const HyperbolicL& L, const FirstOrderM& M,
                                                     const Expr& alpha, const Expr& beta);

/// Requires q not identically zero.
EvolutionInvariants evolution_invariants(const HyperbolicL& L, const FirstOrderM& M);

/// The invariantized existence conditions: with Q = ln q expanded rationally
/// (Q_x = q_x/q and so on), a transformation exists for a pair with these
/// evolution invariants iff both of
///   I2 + Q_xy
///   I3_x + q I3_y + (q_y - q_x/q) I3 - Q_x Q_xy + Q_xxy
/// are zero.
std::pair<Expr, Expr> invariant_conditions(const EvolutionInvariants& inv);

/// The two sides of the reduced existence system in gauge invariants:
///   -2q^2 m + q^2 R_y + q_x R + q_y q_x - q R_x - q_xy q
///   q_x h - q h_x - q^2 h_y - q_x m + q_x R_y + q m_x - q R_xy - q_y q h
///     - q R m + q R R_y
std::pair<Expr, Expr> reduced_conditions(const Expr& q, const Expr& R, const Expr& h,
                                         const Expr& m);

/// The explicit particular solution family of the invariantized condition:
///   I30(z) = -z_xxy/z_x + z_xx z_xy/z_x^2 + z_xy^2/(2 z_x z_y).
Expr i30(const Expr& z);

/// Evolution invariants parametrized by z, with A = z_xy/z_x, B = z_xy/z_y:
///   (q, I2, I3) = (-z_x/z_y, B_y - A_x, -A_x + AB/2).
/// A separable z (z_xy identically zero) yields A = B = 0 with q still taken
/// from -z_x/z_y.
EvolutionInvariants wronskian_invariants(const Expr& z);

/// Left side minus right side of the I3 condition for a candidate pair
/// (q, I3); zero iff the candidate satisfies it.
Expr i3_residual(const Expr& q, const Expr& I3);

}  // namespace wronsky
