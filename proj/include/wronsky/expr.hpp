#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wronsky {

using Rat = mpq_class;
using Int = mpz_class;

/// Exact rational num/den, canonicalized. den must be nonzero.
Rat make_rat(const Int& num, const Int& den);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text does not conform to the grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Mathematically undefined request: division by zero, ln(0), symbol of the
/// zero operator.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented operation precondition does not hold for the given inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

enum class Var { x, y };

/// A formal mixed partial derivative of a named function symbol.
/// (symbol, dx, dy) identifies the variable; commutativity of the two
/// derivations holds by construction, both orders land on one multi-index.
struct JetVar {
  std::string symbol;
  int dx = 0;
  int dy = 0;
};

int compare(const JetVar& a, const JetVar& b);
bool operator==(const JetVar& a, const JetVar& b);
bool operator!=(const JetVar& a, const JetVar& b);
bool operator<(const JetVar& a, const JetVar& b);

enum class KernelKind { exp, ln };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// One multiplicative indeterminate of the polynomial layer: the independent
/// variables x and y, a jet variable, or a transcendental kernel exp(u)/ln(u)
/// whose argument is itself a normalized expression.
class Atom {
 public:
  enum class Tag { x, y, jet, kernel };

  static Atom x();
  static Atom y();
  static Atom jet(JetVar v);
  static Atom kernel(KernelKind kind, const Expr& arg);

  Tag tag() const { return tag_; }
  bool is_kernel() const { return tag_ == Tag::kernel; }
  const JetVar& jetvar() const { return jet_; }
  KernelKind kernel_kind() const { return kind_; }
  const Expr& kernel_arg() const { return *arg_; }

 private:
  Atom() = default;
  Tag tag_ = Tag::x;
  JetVar jet_;
  KernelKind kind_ = KernelKind::exp;
  ExprPtr arg_;
};

/// Total order on atoms: x < y < jet variables sorted by (symbol, dx, dy)
/// < kernels sorted by (argument, kind).  Deterministic, so canonical forms
/// are reproducible byte for byte.
int compare(const Atom& a, const Atom& b);
bool operator==(const Atom& a, const Atom& b);
bool operator!=(const Atom& a, const Atom& b);

/// Product of atom powers with positive exponents, kept in ascending atom
/// order.  A monomial carries at most one exp kernel, always at exponent one:
/// exp factors merge through their arguments, exp(u)*exp(v) -> exp(u+v) and
/// exp(0) -> 1.
class Monomial {
 public:
  Monomial() = default;  // the empty product, i.e. 1

  const std::vector<std::pair<Atom, int>>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }
  int degree() const;
  bool has_kernel() const;
  int exponent_of(const Atom& a) const;
  bool divisible_by(const Monomial& b) const;

  static Monomial single(Atom a, int exponent = 1);
  static Monomial mul(const Monomial& a, const Monomial& b);
  static Monomial pow(const Monomial& a, int k);  // k >= 0
  static Monomial common(const Monomial& a, const Monomial& b);
  static Monomial div(const Monomial& a, const Monomial& b);  // exact

 private:
  std::vector<std::pair<Atom, int>> factors_;
  void normalize_kernels();
};

/// Graded comparison: total degree first, ties broken lexicographically with
/// precedence to atoms earlier in the atom order.
int compare_graded(const Monomial& a, const Monomial& b);
bool operator==(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rat coeff;
};

/// Multivariate polynomial over the atom set, stored as terms in descending
/// graded order with nonzero coefficients.
class Poly {
 public:
  Poly() = default;  // zero

  static Poly constant(const Rat& c);
  static Poly one();
  static Poly atom(Atom a, int exponent = 1);
  static Poly monomial(Monomial m, const Rat& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::optional<Rat> as_constant() const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const;
  int total_degree() const;  // -1 for the zero polynomial
  bool has_kernel() const;

  static Poly add(const Poly& a, const Poly& b);
  static Poly sub(const Poly& a, const Poly& b);
  static Poly neg(const Poly& a);
  static Poly mul(const Poly& a, const Poly& b);
  static Poly mul_rat(const Poly& a, const Rat& c);
  static Poly mul_term(const Poly& a, const Monomial& m, const Rat& c);
  static Poly pow(const Poly& a, int k);  // k >= 0
  /// Exact division; throws std::logic_error if b does not divide a.
  static Poly divexact(const Poly& a, const Poly& b);
  /// GCD over the rationals, returned integer-primitive with positive
  /// leading coefficient (primitive pseudo-remainder sequences, with a
  /// monomial fast path that covers most reductions in practice).
  static Poly gcd(const Poly& a, const Poly& b);

  Monomial content_monomial() const;
  /// Scale to integer coefficients with content one and positive leading
  /// coefficient.
  static Poly unit_normal(const Poly& a);

  std::string str() const;

 private:
  std::vector<Term> terms_;
  friend int compare(const Poly& a, const Poly& b);
};

int compare(const Poly& a, const Poly& b);
bool operator==(const Poly& a, const Poly& b);

struct ZeroTest {
  bool zero;
  /// Set when the expression is not structurally zero but transcendental
  /// kernels survived rewriting, so "nonzero" is not conclusive.
  bool unreduced_kernels;
};

/// Evaluation point for the rational-point oracle: values for x, y and for
/// every jet variable (each jet is an independent coordinate).
struct EvalPoint {
  Rat x;
  Rat y;
  std::map<JetVar, Rat> jets;
};

/// Exact symbolic expression, kept canonical by construction: a reduced
/// fraction of two jointly integer-primitive polynomials whose denominator
/// has a positive leading coefficient.  Values are immutable and freely
/// shareable between threads; every operation is a pure function.
class Expr {
 public:
  Expr();  // zero

  static Expr zero();
  static Expr one();
  static Expr rational(const Rat& c);
  static Expr integer(long n);
  static Expr variable(Var v);
  static Expr jet(const std::string& symbol, int dx = 0, int dy = 0);
  /// exp(u) with rewrites: exp(0) -> 1 and, for polynomial arguments,
  /// integer multiples of ln atoms pulled out, exp(c*ln(v) + w) -> v^c exp(w);
  /// in particular exp(ln(u)) -> u.
  static Expr exp(const Expr& u);
  /// ln(u) with rewrites ln(1) -> 0 and ln(exp(u)) -> u.  ln(0) is a domain
  /// error.
  static Expr ln(const Expr& u);

  /// Raw fraction constructor; reduces to canonical form.  Division by a
  /// structurally zero denominator is a hard error.
  static Expr fraction(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_rational() const;
  std::optional<Rat> as_rational() const;
  bool has_kernels() const;

  /// Sound zero decision: exact on the kernel-free fragment, conservative
  /// (flagged) when kernels remain.
  ZeroTest test_zero() const;

  Expr pow(int k) const;
  Expr diff(Var v, int order = 1) const;

  std::optional<Rat> eval(const EvalPoint& point) const;
  void collect_jets(std::set<JetVar>& out) const;
  std::set<JetVar> jets() const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

 private:
  /// Canonical scaling and exp-free-denominator pass, no gcd reduction; the
  /// caller guarantees num/den is already in lowest terms.
  static Expr assemble(Poly num, Poly den);

  Poly num_;
  Poly den_;
};

int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
bool operator!=(const Expr& a, const Expr& b);
bool operator<(const Expr& a, const Expr& b);

/// Expressions are canonical on construction; normalize is the identity
/// projection, exposed so call sites can be explicit about it.
Expr normalize(const Expr& e);

bool is_zero(const Expr& e);

Expr diff(const Expr& e, Var v, int order = 1);

/// Consistent replacement of function symbols.  A full binding f -> E
/// replaces every jet of f by the matching derivative of E; a jet-level
/// binding (f, i0, j0) -> E replaces jets (f, i, j) with i >= i0, j >= j0 by
/// the derivative of E of order (i-i0, j-j0), leaving lower jets free.
class Substitution {
 public:
  Substitution& bind(const std::string& symbol, Expr value);
  Substitution& bind_jet(const std::string& symbol, int dx, int dy, Expr value);
  bool empty() const { return bindings_.empty(); }

 private:
  struct Binding {
    JetVar base;
    Expr value;
  };
  std::vector<Binding> bindings_;
  friend class Substituter;
};

/// Throws DomainError when two bindings apply to the same jet occurrence.
Expr substitute(const Expr& e, const Substitution& s);

}  // namespace wronsky
