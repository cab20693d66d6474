#pragma once

#include <utility>
#include <vector>

#include "wronsky/lpdo.hpp"

namespace wronsky {

struct GaugeInvariants;

/// Hyperbolic operator Dx*Dy + a*Dx + b*Dy + c.
struct HyperbolicL {
  Expr a, b, c;

  LPDO to_lpdo() const;
  /// The inverse conversion; the operator must have unit coefficient at
  /// Dx*Dy and no other second-order terms.
  static HyperbolicL from_lpdo(const LPDO& op);
};

bool operator==(const HyperbolicL& a, const HyperbolicL& b);
bool operator!=(const HyperbolicL& a, const HyperbolicL& b);

/// First-order operator Dx + q*Dy + r.
struct FirstOrderM {
  Expr q, r;

  LPDO to_lpdo() const;
  static FirstOrderM from_lpdo(const LPDO& op);
};

bool operator==(const FirstOrderM& a, const FirstOrderM& b);
bool operator!=(const FirstOrderM& a, const FirstOrderM& b);

/// A candidate transformation N ∘ L = L1 ∘ M together with the residuals of
/// the intertwining relation.  When every residual is zero the relation holds
/// exactly, Sym(L1) = Sym(L) and Sym(N) = Sym(M).
struct DarbouxWitness {
  HyperbolicL L;
  LPDO M;
  LPDO N;
  HyperbolicL L1;
  std::vector<Expr> residuals;

  bool exact() const;
};

enum class MixedOrder { degree_then_x, degree_then_y };

/// Eliminates every mixed index (i>=1, j>=1) of M by subtracting right
/// multiples coeff * Dx^(i-1) Dy^(j-1) ∘ L; the result is the representative
/// of M's expansion class without mixed derivatives.  The elimination order
/// is decreasing total degree with a configurable tie break; any admissible
/// order gives the same reduction.
LPDO reduce_mixed(const HyperbolicL& L, const LPDO& M,
                  MixedOrder order = MixedOrder::degree_then_x);

/// (max Dx order, max Dy order) of reduce_mixed(L, M).  The zero operator
/// (or an M that reduces to zero) is a domain error.
std::pair<int, int> bidegree(const HyperbolicL& L, const LPDO& M);

/// M + A ∘ L.  Preserves the existence of a transformation for L and its
/// resulting operator.
LPDO expand(const LPDO& M, const LPDO& A, const HyperbolicL& L);

/// The order-one transformation with M = Dy + a (direction x) or M = Dx + b
/// (direction y).  N and L1 come from exact coefficient matching, which
/// pins them uniquely when the corresponding Laplace invariant is nonzero;
/// in the degenerate case the free constant-term of N is fixed to the
/// matching coefficient of M.  Always exists, so the residual list is empty.
DarbouxWitness laplace(const HyperbolicL& L, Var direction);

/// Witness for p*M from a witness for M, p invertible:
/// N' = p ∘ N, L1' = p ∘ L1 ∘ p^(-1).
DarbouxWitness left_scale(const DarbouxWitness& w, const Expr& p);

/// Chains witnesses: requires w2.L == w1.L1; the result transforms w1.L by
/// M = w2.M ∘ w1.M.
DarbouxWitness compose_dt(const DarbouxWitness& w1, const DarbouxWitness& w2);

/// The operator psi -> W(psi, psi_1, ..., psi_(m+n)) given by expanding the
/// determinant with first row (psi, Dx psi, ..., Dx^m psi, Dy psi, ..., Dy^n
/// psi) along that row.  Each solution must lie in Ker L, and the minor
/// obtained by deleting the first row and column must be nonzero.
LPDO wronskian_mn(const HyperbolicL& L, const std::vector<Expr>& solutions, int m, int n);

/// The bi-degree (1,1) construction from two independent kernel elements:
/// M = Dx + (alpha/d) Dy + beta/d with
///   d     = -psi1*psi2_y + psi2*psi1_y,
///   alpha =  psi1*psi2_x - psi2*psi1_x,
///   beta  = -psi2_x*psi1_y + psi2_y*psi1_x.
FirstOrderM darboux11(const HyperbolicL& L, const Expr& psi1, const Expr& psi2);

/// Determines N and L1 by exact coefficient matching of N ∘ L = L1 ∘ M with
/// the ansatz N of symbol X + qY and L1 hyperbolic; the matching is a
/// triangular linear solve with a unique solution.  The two unmatched
/// coefficient equations, at indices (0,1) and (0,0), are returned as the
/// residuals: the transformation exists iff both vanish.
DarbouxWitness solve_intertwining(const HyperbolicL& L, const FirstOrderM& M);

/// The two polynomial existence conditions for the pair (L, M): a Darboux
/// transformation with first-order M exists iff both are zero.
std::pair<Expr, Expr> existence_conditions(const HyperbolicL& L, const FirstOrderM& M);

/// Hyperbolic operator with the two given kernel elements and constant-term
/// coefficient c0: solves L(psi1) = L(psi2) = 0 for a and b.  Errors on a
/// singular system.
HyperbolicL hyperbolic_with_kernel(const Expr& psi1, const Expr& psi2, const Expr& c0);

/// Builds a pair (L', M') from the parametrizing function z and an auxiliary
/// kernel element z1: L' has kernel elements z1 and z*z1, M' is the
/// bi-degree (1,1) construction on them, and the free coefficient c is
/// chosen so the gauge invariant R of the pair equals targets.R.
std::pair<HyperbolicL, FirstOrderM> reconstruct_pair(const GaugeInvariants& targets,
                                                     const Expr& z, const Expr& z1);

}  // namespace wronsky
