#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wronsky/expr.hpp"

namespace wronsky {

struct DiffIndex {
  int dx = 0;
  int dy = 0;
};

bool operator==(DiffIndex a, DiffIndex b);
bool operator<(DiffIndex a, DiffIndex b);

/// Linear partial differential operator in K[Dx, Dy]: a sparse map from the
/// derivative multi-index to a nonzero coefficient.  The zero operator has an
/// empty map.  Immutable in spirit: operations return new values.
class LPDO {
 public:
  LPDO() = default;  // zero operator

  static LPDO identity();
  static LPDO dx();
  static LPDO dy();
  static LPDO term(Expr coeff, int dx, int dy);

  bool is_zero() const { return terms_.empty(); }
  /// max(dx+dy) over stored indices; -1 for the zero operator.
  int order() const;
  Expr coeff(int dx, int dy) const;
  const std::map<DiffIndex, Expr>& terms() const { return terms_; }

  void add_term(int dx, int dy, const Expr& c);

  /// Text form "coeff*Dx^i*Dy^j + ...", terms in descending (order, dx).
  std::string str() const;

 private:
  std::map<DiffIndex, Expr> terms_;
};

bool operator==(const LPDO& a, const LPDO& b);
bool operator!=(const LPDO& a, const LPDO& b);

/// Exact composition A ∘ B by the Leibniz expansion
/// Dx^i Dy^j ∘ f = sum C(i,k) C(j,l) (dx^k dy^l f) Dx^(i-k) Dy^(j-l).
LPDO compose(const LPDO& a, const LPDO& b);

LPDO linear_combine(const std::vector<std::pair<Expr, LPDO>>& parts);
LPDO operator+(const LPDO& a, const LPDO& b);
LPDO operator-(const LPDO& a, const LPDO& b);
LPDO operator*(const Expr& c, const LPDO& a);

/// A applied to an expression: sum coeff(i,j) dx^i dy^j f.
Expr apply(const LPDO& a, const Expr& f);

/// Gauge conjugation exp(-alpha) ∘ A ∘ exp(alpha), computed on the jets of
/// alpha directly (Dx -> Dx + alpha_x, Dy -> Dy + alpha_y), so no kernel
/// atoms enter the coefficients.
LPDO gauge(const LPDO& a, const Expr& alpha);

/// p ∘ A ∘ p^(-1) for an invertible function p.
LPDO conjugate(const LPDO& a, const Expr& p);

/// Top-degree slice of an operator as a homogeneous polynomial in the formal
/// symbols X, Y.
struct SymbolPoly {
  int order = 0;
  std::map<DiffIndex, Expr> terms;

  std::string str() const;
};

bool operator==(const SymbolPoly& a, const SymbolPoly& b);
SymbolPoly mul(const SymbolPoly& a, const SymbolPoly& b);

/// Throws DomainError for the zero operator.
SymbolPoly symbol_of(const LPDO& a);

/// Operator text format, e.g. "Dx*Dy + a*Dx + b*Dy + c".
LPDO parse_lpdo(std::string_view text);

}  // namespace wronsky
