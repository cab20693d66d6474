#include "wronsky/expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <tuple>

namespace wronsky {

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

ParseError::ParseError(const std::string& what, std::size_t position)
    : Error(what), position_(position) {}

// ---------------------------------------------------------------------------
// JetVar

int compare(const JetVar& a, const JetVar& b) {
  if (int c = a.symbol.compare(b.symbol)) return c < 0 ? -1 : 1;
  if (a.dx != b.dx) return a.dx < b.dx ? -1 : 1;
  if (a.dy != b.dy) return a.dy < b.dy ? -1 : 1;
  return 0;
}

bool operator==(const JetVar& a, const JetVar& b) { return compare(a, b) == 0; }
bool operator!=(const JetVar& a, const JetVar& b) { return compare(a, b) != 0; }
bool operator<(const JetVar& a, const JetVar& b) { return compare(a, b) < 0; }

// ---------------------------------------------------------------------------
// Atom

Atom Atom::x() {
  Atom a;
  a.tag_ = Tag::x;
  return a;
}

Atom Atom::y() {
  Atom a;
  a.tag_ = Tag::y;
  return a;
}

Atom Atom::jet(JetVar v) {
  Atom a;
  a.tag_ = Tag::jet;
  a.jet_ = std::move(v);
  return a;
}

Atom Atom::kernel(KernelKind kind, const Expr& arg) {
  Atom a;
  a.tag_ = Tag::kernel;
  a.kind_ = kind;
  a.arg_ = std::make_shared<Expr>(arg);
  return a;
}

int compare(const Atom& a, const Atom& b) {
  if (a.tag() != b.tag()) return a.tag() < b.tag() ? -1 : 1;
  switch (a.tag()) {
    case Atom::Tag::x:
    case Atom::Tag::y:
      return 0;
    case Atom::Tag::jet:
      return compare(a.jetvar(), b.jetvar());
    case Atom::Tag::kernel: {
      if (int c = compare(a.kernel_arg(), b.kernel_arg())) return c;
      if (a.kernel_kind() != b.kernel_kind())
        return a.kernel_kind() < b.kernel_kind() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }
bool operator!=(const Atom& a, const Atom& b) { return compare(a, b) != 0; }

namespace {

std::string atom_str(const Atom& a) {
  switch (a.tag()) {
    case Atom::Tag::x:
      return "x";
    case Atom::Tag::y:
      return "y";
    case Atom::Tag::jet: {
      const JetVar& v = a.jetvar();
      if (v.dx == 0 && v.dy == 0) return v.symbol;
      std::string s = v.symbol + "_";
      s.append(static_cast<std::size_t>(v.dx), 'x');
      s.append(static_cast<std::size_t>(v.dy), 'y');
      return s;
    }
    case Atom::Tag::kernel: {
      std::string head = a.kernel_kind() == KernelKind::exp ? "exp(" : "ln(";
      return head + a.kernel_arg().str() + ")";
    }
  }
  return {};
}

Expr atom_expr(const Atom& a) { return Expr::fraction(Poly::atom(a), Poly::one()); }

}  // namespace

// ---------------------------------------------------------------------------
// Monomial

int Monomial::degree() const {
  int d = 0;
  for (const auto& [a, e] : factors_) d += e;
  return d;
}

bool Monomial::has_kernel() const {
  for (const auto& [a, e] : factors_)
    if (a.is_kernel()) return true;
  return false;
}

int Monomial::exponent_of(const Atom& a) const {
  for (const auto& [b, e] : factors_)
    if (b == a) return e;
  return 0;
}

bool Monomial::divisible_by(const Monomial& b) const {
  for (const auto& [a, e] : b.factors_)
    if (exponent_of(a) < e) return false;
  return true;
}

Monomial Monomial::single(Atom a, int exponent) {
  Monomial m;
  if (exponent != 0) {
    m.factors_.emplace_back(std::move(a), exponent);
    m.normalize_kernels();
  }
  return m;
}

Monomial Monomial::mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto ia = a.factors_.begin(), ib = b.factors_.begin();
  while (ia != a.factors_.end() && ib != b.factors_.end()) {
    int c = compare(ia->first, ib->first);
    if (c < 0) {
      out.factors_.push_back(*ia++);
    } else if (c > 0) {
      out.factors_.push_back(*ib++);
    } else {
      out.factors_.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  out.factors_.insert(out.factors_.end(), ia, a.factors_.end());
  out.factors_.insert(out.factors_.end(), ib, b.factors_.end());
  out.normalize_kernels();
  return out;
}

Monomial Monomial::pow(const Monomial& a, int k) {
  assert(k >= 0);
  Monomial out;
  if (k == 0) return out;
  out.factors_ = a.factors_;
  for (auto& [atom, e] : out.factors_) e *= k;
  out.normalize_kernels();
  return out;
}

Monomial Monomial::common(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto ia = a.factors_.begin(), ib = b.factors_.begin();
  while (ia != a.factors_.end() && ib != b.factors_.end()) {
    int c = compare(ia->first, ib->first);
    if (c < 0) {
      ++ia;
    } else if (c > 0) {
      ++ib;
    } else {
      out.factors_.emplace_back(ia->first, std::min(ia->second, ib->second));
      ++ia;
      ++ib;
    }
  }
  return out;
}

Monomial Monomial::div(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto ia = a.factors_.begin(), ib = b.factors_.begin();
  while (ia != a.factors_.end()) {
    if (ib == b.factors_.end()) {
      out.factors_.insert(out.factors_.end(), ia, a.factors_.end());
      break;
    }
    int c = compare(ia->first, ib->first);
    if (c < 0) {
      out.factors_.push_back(*ia++);
    } else if (c == 0) {
      int e = ia->second - ib->second;
      if (e < 0) throw std::logic_error("monomial division is not exact");
      if (e > 0) out.factors_.emplace_back(ia->first, e);
      ++ia;
      ++ib;
    } else {
      throw std::logic_error("monomial division is not exact");
    }
  }
  if (ib != b.factors_.end()) throw std::logic_error("monomial division is not exact");
  return out;
}

// Keep at most one exp kernel per monomial, at exponent one.  Several exp
// factors merge through their arguments; exp(0) drops out.
void Monomial::normalize_kernels() {
  int n_exp = 0;
  bool needs_merge = false;
  for (const auto& [a, e] : factors_) {
    if (a.is_kernel() && a.kernel_kind() == KernelKind::exp) {
      ++n_exp;
      if (e != 1) needs_merge = true;
    }
  }
  if (n_exp == 0 || (n_exp == 1 && !needs_merge)) return;

  Expr sum = Expr::zero();
  std::vector<std::pair<Atom, int>> rest;
  rest.reserve(factors_.size());
  for (auto& [a, e] : factors_) {
    if (a.is_kernel() && a.kernel_kind() == KernelKind::exp) {
      sum = sum + a.kernel_arg() * Expr::integer(e);
    } else {
      rest.emplace_back(std::move(a), e);
    }
  }
  factors_ = std::move(rest);
  if (!sum.is_zero()) {
    Atom merged = Atom::kernel(KernelKind::exp, sum);
    auto pos = std::lower_bound(
        factors_.begin(), factors_.end(), merged,
        [](const std::pair<Atom, int>& f, const Atom& a) { return compare(f.first, a) < 0; });
    factors_.insert(pos, {merged, 1});
  }
}

int compare_graded(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  auto ia = a.factors().begin(), ib = b.factors().begin();
  while (ia != a.factors().end() && ib != b.factors().end()) {
    int c = compare(ia->first, ib->first);
    if (c < 0) return 1;   // a has the earlier atom, a is larger
    if (c > 0) return -1;
    if (ia->second != ib->second) return ia->second > ib->second ? 1 : -1;
    ++ia;
    ++ib;
  }
  if (ia != a.factors().end()) return 1;
  if (ib != b.factors().end()) return -1;
  return 0;
}

bool operator==(const Monomial& a, const Monomial& b) {
  return compare_graded(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Poly

namespace {

struct MonoGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare_graded(a, b) > 0;
  }
};

}  // namespace

Poly Poly::constant(const Rat& c) {
  Poly p;
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

Poly Poly::one() { return constant(1); }

Poly Poly::atom(Atom a, int exponent) {
  return monomial(Monomial::single(std::move(a), exponent), 1);
}

Poly Poly::monomial(Monomial m, const Rat& c) {
  Poly p;
  if (c != 0) p.terms_.push_back({std::move(m), c});
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty());
}

std::optional<Rat> Poly::as_constant() const {
  if (terms_.empty()) return Rat(0);
  if (terms_.size() == 1 && terms_[0].mono.empty()) return terms_[0].coeff;
  return std::nullopt;
}

const Term& Poly::leading() const {
  if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
  return terms_[0];
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  return terms_[0].mono.degree();
}

bool Poly::has_kernel() const {
  for (const auto& t : terms_)
    if (t.mono.has_kernel()) return true;
  return false;
}

Poly Poly::add(const Poly& a, const Poly& b) {
  Poly out;
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() && ib != b.terms_.end()) {
    int c = compare_graded(ia->mono, ib->mono);
    if (c > 0) {
      out.terms_.push_back(*ia++);
    } else if (c < 0) {
      out.terms_.push_back(*ib++);
    } else {
      Rat s = ia->coeff + ib->coeff;
      if (s != 0) out.terms_.push_back({ia->mono, s});
      ++ia;
      ++ib;
    }
  }
  out.terms_.insert(out.terms_.end(), ia, a.terms_.end());
  out.terms_.insert(out.terms_.end(), ib, b.terms_.end());
  return out;
}

Poly Poly::neg(const Poly& a) {
  Poly out = a;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Poly Poly::sub(const Poly& a, const Poly& b) { return add(a, neg(b)); }

Poly Poly::mul(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::map<Monomial, Rat, MonoGreater> acc;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      Monomial m = Monomial::mul(ta.mono, tb.mono);
      acc[std::move(m)] += ta.coeff * tb.coeff;
    }
  Poly out;
  out.terms_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.terms_.push_back({m, c});
  return out;
}

Poly Poly::mul_rat(const Poly& a, const Rat& c) {
  if (c == 0) return {};
  Poly out = a;
  for (auto& t : out.terms_) t.coeff *= c;
  return out;
}

Poly Poly::mul_term(const Poly& a, const Monomial& m, const Rat& c) {
  return mul(a, monomial(m, c));
}

Poly Poly::pow(const Poly& a, int k) {
  assert(k >= 0);
  Poly out = one();
  Poly base = a;
  int n = k;
  while (n > 0) {
    if (n & 1) out = mul(out, base);
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return out;
}

Poly Poly::divexact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::logic_error("polynomial division by zero");
  if (a.is_zero()) return {};
  if (auto c = b.as_constant()) return mul_rat(a, 1 / *c);
  Poly rem = a;
  Poly out;
  const Term& lb = b.leading();
  while (!rem.is_zero()) {
    const Term& lr = rem.leading();
    if (!lr.mono.divisible_by(lb.mono))
      throw std::logic_error("polynomial division is not exact");
    Monomial m = Monomial::div(lr.mono, lb.mono);
    Rat c = lr.coeff / lb.coeff;
    out.terms_.push_back({m, c});
    rem = sub(rem, mul_term(b, m, c));
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const Term& s, const Term& t) { return compare_graded(s.mono, t.mono) > 0; });
  return out;
}

Monomial Poly::content_monomial() const {
  if (terms_.empty()) return {};
  Monomial m = terms_[0].mono;
  for (std::size_t i = 1; i < terms_.size() && !m.empty(); ++i)
    m = Monomial::common(m, terms_[i].mono);
  return m;
}

Poly Poly::unit_normal(const Poly& a) {
  if (a.is_zero()) return a;
  Int num_gcd = 0, den_lcm = 1;
  for (const auto& t : a.terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den().get_mpz_t());
  }
  Rat scale = make_rat(den_lcm, num_gcd);
  if (a.leading().coeff < 0) scale = -scale;
  return mul_rat(a, scale);
}

// --- gcd machinery --------------------------------------------------------

namespace {

Poly divide_monomial(const Poly& a, const Monomial& m) {
  if (m.empty()) return a;
  Poly p;
  for (const auto& t : a.terms())
    p = Poly::add(p, Poly::monomial(Monomial::div(t.mono, m), t.coeff));
  return p;
}

std::optional<Atom> max_atom(const Poly& p) {
  std::optional<Atom> best;
  for (const auto& t : p.terms())
    for (const auto& [a, e] : t.mono.factors())
      if (!best || compare(a, *best) > 0) best = a;
  return best;
}

int degree_in(const Poly& p, const Atom& v) {
  int d = 0;
  for (const auto& t : p.terms()) d = std::max(d, t.mono.exponent_of(v));
  return d;
}

bool contains_atom(const Poly& p, const Atom& v) {
  for (const auto& t : p.terms())
    if (t.mono.exponent_of(v) > 0) return true;
  return false;
}

// p as a polynomial in v: degree -> coefficient (v-free times the rest).
std::map<int, Poly> coefficients_in(const Poly& p, const Atom& v) {
  std::map<int, Poly> out;
  for (const auto& t : p.terms()) {
    int e = t.mono.exponent_of(v);
    Monomial rest = e > 0 ? Monomial::div(t.mono, Monomial::single(v, e)) : t.mono;
    out[e] = Poly::add(out[e], Poly::monomial(rest, t.coeff));
  }
  return out;
}

Poly lead_coeff_in(const Poly& p, const Atom& v, int deg) {
  Poly out;
  for (const auto& t : p.terms()) {
    if (t.mono.exponent_of(v) == deg) {
      Monomial rest = deg > 0 ? Monomial::div(t.mono, Monomial::single(v, deg)) : t.mono;
      out = Poly::add(out, Poly::monomial(rest, t.coeff));
    }
  }
  return out;
}

Poly prem(const Poly& p, const Poly& q, const Atom& v) {
  int dq = degree_in(q, v);
  Poly lq = lead_coeff_in(q, v, dq);
  Poly r = p;
  int dr = degree_in(r, v);
  while (!r.is_zero() && dr >= dq) {
    Poly lr = lead_coeff_in(r, v, dr);
    Poly shift = Poly::mul(lr, Poly::atom(v, dr - dq));
    r = Poly::sub(Poly::mul(lq, r), Poly::mul(shift, q));
    int d2 = r.is_zero() ? -1 : degree_in(r, v);
    assert(r.is_zero() || d2 < dr);
    dr = d2;
  }
  return r;
}

Poly gcd_core(const Poly& a, const Poly& b);

std::pair<Poly, Poly> content_pp(const Poly& p, const Atom& v) {
  auto coeffs = coefficients_in(p, v);
  Poly cont;
  for (const auto& [d, c] : coeffs) {
    cont = Poly::gcd(cont, c);
    if (cont.as_constant()) break;
  }
  if (cont.as_constant()) return {Poly::one(), p};
  return {cont, Poly::divexact(p, cont)};
}

Poly primitive_in(const Poly& p, const Atom& v) {
  if (p.is_zero()) return p;
  return content_pp(p, v).second;
}

// Both inputs are nonconstant with trivial monomial content.  Kernel atoms
// are not free generators of the monomial monoid (exp factors merge), so a
// structural gcd is not attempted across them; returning 1 only leaves a
// fraction less reduced, never wrong.
Poly gcd_core(const Poly& a, const Poly& b) {
  if (a.as_constant() || b.as_constant()) return Poly::one();
  if (a.has_kernel() || b.has_kernel()) return Poly::one();

  Atom va = *max_atom(a);
  Atom vb = *max_atom(b);
  Atom v = compare(va, vb) >= 0 ? va : vb;
  bool in_a = contains_atom(a, v), in_b = contains_atom(b, v);
  if (!in_a || !in_b) {
    // v lives in only one operand; the gcd cannot contain it.
    const Poly& with = in_a ? a : b;
    const Poly& other = in_a ? b : a;
    Poly g = other;
    for (const auto& [d, c] : coefficients_in(with, v)) {
      g = Poly::gcd(g, c);
      if (g.as_constant()) return Poly::one();
    }
    return g;
  }

  auto [cont_a, pp_a] = content_pp(a, v);
  auto [cont_b, pp_b] = content_pp(b, v);
  Poly cg = Poly::gcd(cont_a, cont_b);

  Poly p = pp_a, q = pp_b;
  if (degree_in(p, v) < degree_in(q, v)) std::swap(p, q);
  while (!q.is_zero()) {
    Poly r = prem(p, q, v);
    p = q;
    q = primitive_in(r, v);
  }
  return Poly::mul(cg, p);
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return unit_normal(b);
  if (b.is_zero()) return unit_normal(a);
  if (compare(a, b) == 0) return unit_normal(a);
  Monomial ca = a.content_monomial();
  Monomial cb = b.content_monomial();
  Monomial cg = Monomial::common(ca, cb);
  Poly pa = divide_monomial(a, ca);
  Poly pb = divide_monomial(b, cb);
  Poly core = gcd_core(pa, pb);
  return unit_normal(mul(core, monomial(cg, 1)));
}

int compare(const Poly& a, const Poly& b) {
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() && ib != b.terms_.end()) {
    if (int c = compare_graded(ia->mono, ib->mono)) return c;
    if (int c = cmp(ia->coeff, ib->coeff)) return c < 0 ? -1 : 1;
    ++ia;
    ++ib;
  }
  if (ia != a.terms_.end()) return 1;
  if (ib != b.terms_.end()) return -1;
  return 0;
}

bool operator==(const Poly& a, const Poly& b) { return compare(a, b) == 0; }

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    bool neg = t.coeff < 0;
    Rat mag = abs(t.coeff);
    std::string body;
    if (t.mono.empty()) {
      body = mag.get_str();
    } else {
      std::string factors;
      for (const auto& [a, e] : t.mono.factors()) {
        if (!factors.empty()) factors += "*";
        factors += atom_str(a);
        if (e != 1) factors += "^" + std::to_string(e);
      }
      body = mag == 1 ? factors : mag.get_str() + "*" + factors;
    }
    if (first) {
      os << (neg ? "-" : "") << body;
      first = false;
    } else {
      os << (neg ? " - " : " + ") << body;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : num_(), den_(Poly::one()) {}

Expr Expr::zero() { return Expr(); }

Expr Expr::one() { return rational(1); }

Expr Expr::rational(const Rat& c) {
  Expr e;
  e.num_ = Poly::constant(c);
  e.den_ = Poly::one();
  if (c != 0) return fraction(e.num_, e.den_);
  return e;
}

Expr Expr::integer(long n) { return rational(Rat(n)); }

Expr Expr::variable(Var v) {
  return fraction(Poly::atom(v == Var::x ? Atom::x() : Atom::y()), Poly::one());
}

Expr Expr::jet(const std::string& symbol, int dx, int dy) {
  if (symbol.empty()) throw DomainError("empty function symbol");
  if (symbol == "x" || symbol == "y")
    throw DomainError("'" + symbol + "' is an independent variable, not a function symbol");
  if (dx < 0 || dy < 0) throw DomainError("negative derivative order");
  return fraction(Poly::atom(Atom::jet(JetVar{symbol, dx, dy})), Poly::one());
}

namespace {

// Joint content of two integer-or-rational coefficient lists: the positive
// rational c such that dividing both polynomials by c leaves integer
// coefficients with overall content one.
Rat joint_content(const Poly& a, const Poly& b) {
  Int num_gcd = 0, den_lcm = 1;
  auto absorb = [&](const Poly& p) {
    for (const auto& t : p.terms()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num().get_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den().get_mpz_t());
    }
  };
  absorb(a);
  absorb(b);
  return make_rat(num_gcd, den_lcm);
}

}  // namespace

Expr Expr::assemble(Poly num, Poly den) {
  Expr e;
  if (num.is_zero()) return e;

  // Denominators are kept exp-free when a common exp factor allows it:
  // multiplying through by exp(-B) moves it into the numerator.
  Monomial dc = den.content_monomial();
  for (const auto& [a, ex] : dc.factors()) {
    if (a.is_kernel() && a.kernel_kind() == KernelKind::exp) {
      Expr negarg = -(a.kernel_arg() * Expr::integer(ex));
      Monomial inv = Monomial::single(Atom::kernel(KernelKind::exp, negarg));
      num = Poly::mul_term(num, inv, 1);
      den = Poly::mul_term(den, inv, 1);
      break;  // a monomial holds at most one exp factor
    }
  }

  Rat scale = joint_content(num, den);
  if (den.leading().coeff < 0) scale = -scale;
  Rat inv = 1 / scale;
  e.num_ = Poly::mul_rat(num, inv);
  e.den_ = Poly::mul_rat(den, inv);
  return e;
}

Expr Expr::fraction(Poly num, Poly den) {
  if (den.is_zero()) throw DomainError("division by zero expression");
  if (num.is_zero()) return Expr();
  if (!den.as_constant()) {
    Poly g = Poly::gcd(num, den);
    if (!(g.as_constant() && *g.as_constant() == 1)) {
      num = Poly::divexact(num, g);
      den = Poly::divexact(den, g);
    }
  }
  return assemble(std::move(num), std::move(den));
}

bool Expr::is_one() const {
  return num_.as_constant() == Rat(1) && den_.as_constant() == Rat(1);
}

bool Expr::is_rational() const { return num_.is_constant() && den_.is_constant(); }

std::optional<Rat> Expr::as_rational() const {
  auto n = num_.as_constant();
  auto d = den_.as_constant();
  if (n && d) return *n / *d;
  return std::nullopt;
}

bool Expr::has_kernels() const { return num_.has_kernel() || den_.has_kernel(); }

ZeroTest Expr::test_zero() const {
  bool zero = num_.is_zero();
  return {zero, !zero && num_.has_kernel()};
}

namespace {

bool poly_is_unit(const Poly& g) { return g.as_constant().has_value(); }

// Divides out the gcd of a and b in place; returns true when nontrivial.
bool cancel(Poly& a, Poly& b) {
  Poly g = Poly::gcd(a, b);
  if (poly_is_unit(g)) return false;
  a = Poly::divexact(a, g);
  b = Poly::divexact(b, g);
  return true;
}

}  // namespace

// Inputs are reduced fractions; the least-common-denominator scheme keeps
// every gcd at the scale of the operand denominators.  With d1, d2 coprime
// the sum is already in lowest terms; otherwise the only common factor of
// numerator and denominator divides g = gcd(d1, d2).
Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Poly g = Poly::gcd(a.den_, b.den_);
  if (poly_is_unit(g)) {
    return Expr::assemble(Poly::add(Poly::mul(a.num_, b.den_), Poly::mul(b.num_, a.den_)),
                          Poly::mul(a.den_, b.den_));
  }
  Poly t1 = Poly::divexact(a.den_, g);
  Poly t2 = Poly::divexact(b.den_, g);
  Poly num = Poly::add(Poly::mul(a.num_, t2), Poly::mul(b.num_, t1));
  if (num.is_zero()) return Expr::zero();
  Poly h = Poly::gcd(num, g);
  if (!poly_is_unit(h)) {
    num = Poly::divexact(num, h);
    g = Poly::divexact(g, h);
  }
  return Expr::assemble(std::move(num), Poly::mul(g, Poly::mul(t1, t2)));
}

Expr operator-(const Expr& a) {
  Expr out = a;
  out.num_ = Poly::neg(out.num_);
  return out;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

// Cross-cancellation: since both operands are reduced, removing
// gcd(num_a, den_b) and gcd(num_b, den_a) leaves the product reduced.
Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::zero();
  Poly n1 = a.num_, d2 = b.den_;
  cancel(n1, d2);
  Poly n2 = b.num_, d1 = a.den_;
  cancel(n2, d1);
  return Expr::assemble(Poly::mul(n1, n2), Poly::mul(d1, d2));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DomainError("division by zero expression");
  if (a.is_zero()) return Expr::zero();
  Poly n1 = a.num_, n2 = b.num_;
  cancel(n1, n2);
  Poly d1 = a.den_, d2 = b.den_;
  cancel(d1, d2);
  return Expr::assemble(Poly::mul(n1, d2), Poly::mul(d1, n2));
}

Expr Expr::pow(int k) const {
  if (k == 0) return one();
  // num and den are coprime, so their powers are as well.
  if (k > 0) return assemble(Poly::pow(num_, k), Poly::pow(den_, k));
  if (is_zero()) throw DomainError("zero raised to a negative power");
  return assemble(Poly::pow(den_, -k), Poly::pow(num_, -k));
}

Expr Expr::exp(const Expr& u) {
  if (u.is_zero()) return one();
  Expr factor = one();
  Expr rest = u;
  if (auto dc = u.den().as_constant()) {
    // Pull out integer multiples of ln atoms: exp(c*ln(v) + w) -> v^c exp(w).
    for (const auto& t : u.num().terms()) {
      const auto& f = t.mono.factors();
      if (f.size() != 1 || f[0].second != 1) continue;
      const Atom& a = f[0].first;
      if (!a.is_kernel() || a.kernel_kind() != KernelKind::ln) continue;
      Rat c = t.coeff / *dc;
      if (c.get_den() != 1 || !c.get_num().fits_slong_p()) continue;
      long k = c.get_num().get_si();
      factor = factor * a.kernel_arg().pow(static_cast<int>(k));
      rest = rest - atom_expr(a) * rational(c);
    }
  }
  if (rest.is_zero()) return factor;
  return factor * atom_expr(Atom::kernel(KernelKind::exp, rest));
}

Expr Expr::ln(const Expr& u) {
  if (u.is_zero()) throw DomainError("ln of zero expression");
  if (u.is_one()) return zero();
  if (u.den().as_constant() == Rat(1) && u.num().terms().size() == 1) {
    const Term& t = u.num().terms()[0];
    const auto& f = t.mono.factors();
    if (t.coeff == 1 && f.size() == 1 && f[0].second == 1 && f[0].first.is_kernel() &&
        f[0].first.kernel_kind() == KernelKind::exp) {
      return f[0].first.kernel_arg();
    }
  }
  return atom_expr(Atom::kernel(KernelKind::ln, u));
}

namespace {

Expr atom_diff(const Atom& a, Var v) {
  switch (a.tag()) {
    case Atom::Tag::x:
      return v == Var::x ? Expr::one() : Expr::zero();
    case Atom::Tag::y:
      return v == Var::y ? Expr::one() : Expr::zero();
    case Atom::Tag::jet: {
      const JetVar& j = a.jetvar();
      return Expr::jet(j.symbol, j.dx + (v == Var::x ? 1 : 0), j.dy + (v == Var::y ? 1 : 0));
    }
    case Atom::Tag::kernel: {
      Expr darg = a.kernel_arg().diff(v);
      if (a.kernel_kind() == KernelKind::exp) return darg * atom_expr(a);
      return darg / a.kernel_arg();
    }
  }
  return Expr::zero();
}

Expr poly_diff(const Poly& p, Var v) {
  Expr total = Expr::zero();
  for (const auto& t : p.terms()) {
    for (const auto& [a, e] : t.mono.factors()) {
      Expr da = atom_diff(a, v);
      if (da.is_zero()) continue;
      Monomial rest = Monomial::div(t.mono, Monomial::single(a, 1));
      total = total + Expr::fraction(Poly::monomial(rest, t.coeff * e), Poly::one()) * da;
    }
  }
  return total;
}

}  // namespace

Expr Expr::diff(Var v, int order) const {
  assert(order >= 0);
  Expr cur = *this;
  for (int i = 0; i < order; ++i) {
    Expr dn = poly_diff(cur.num_, v);
    Expr dd = poly_diff(cur.den_, v);
    Expr n = fraction(cur.num_, Poly::one());
    Expr d = fraction(cur.den_, Poly::one());
    cur = (dn * d - n * dd) / (d * d);
  }
  return cur;
}

namespace {

Rat rat_pow(const Rat& base, int k) {
  Int n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num().get_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(d.get_mpz_t(), base.get_den().get_mpz_t(), static_cast<unsigned long>(k));
  return make_rat(n, d);
}

std::optional<Rat> poly_eval(const Poly& p, const EvalPoint& point) {
  Rat total = 0;
  for (const auto& t : p.terms()) {
    Rat prod = t.coeff;
    for (const auto& [a, e] : t.mono.factors()) {
      Rat base;
      switch (a.tag()) {
        case Atom::Tag::x:
          base = point.x;
          break;
        case Atom::Tag::y:
          base = point.y;
          break;
        case Atom::Tag::jet: {
          auto it = point.jets.find(a.jetvar());
          if (it == point.jets.end()) return std::nullopt;
          base = it->second;
          break;
        }
        case Atom::Tag::kernel:
          return std::nullopt;
      }
      prod *= rat_pow(base, e);
    }
    total += prod;
  }
  return total;
}

}  // namespace

std::optional<Rat> Expr::eval(const EvalPoint& point) const {
  auto n = poly_eval(num_, point);
  if (!n) return std::nullopt;
  auto d = poly_eval(den_, point);
  if (!d || *d == 0) return std::nullopt;
  return *n / *d;
}

namespace {

void collect_jets_poly(const Poly& p, std::set<JetVar>& out) {
  for (const auto& t : p.terms())
    for (const auto& [a, e] : t.mono.factors()) {
      if (a.tag() == Atom::Tag::jet) out.insert(a.jetvar());
      if (a.is_kernel()) a.kernel_arg().collect_jets(out);
    }
}

}  // namespace

void Expr::collect_jets(std::set<JetVar>& out) const {
  collect_jets_poly(num_, out);
  collect_jets_poly(den_, out);
}

std::set<JetVar> Expr::jets() const {
  std::set<JetVar> out;
  collect_jets(out);
  return out;
}

std::string Expr::str() const {
  if (den_.as_constant() == Rat(1)) return num_.str();
  std::string n = num_.str();
  if (num_.terms().size() > 1) n = "(" + n + ")";
  std::string d = den_.str();
  bool simple = den_.terms().size() == 1 &&
                (den_.terms()[0].mono.empty() ||
                 (den_.terms()[0].coeff == 1 && den_.terms()[0].mono.factors().size() == 1));
  if (!simple) d = "(" + d + ")";
  return n + "/" + d;
}

int compare(const Expr& a, const Expr& b) {
  if (int c = compare(a.num(), b.num())) return c;
  return compare(a.den(), b.den());
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

Expr normalize(const Expr& e) { return e; }

bool is_zero(const Expr& e) { return e.is_zero(); }

Expr diff(const Expr& e, Var v, int order) { return e.diff(v, order); }

// ---------------------------------------------------------------------------
// Substitution

Substitution& Substitution::bind(const std::string& symbol, Expr value) {
  bindings_.push_back({JetVar{symbol, 0, 0}, std::move(value)});
  return *this;
}

Substitution& Substitution::bind_jet(const std::string& symbol, int dx, int dy, Expr value) {
  bindings_.push_back({JetVar{symbol, dx, dy}, std::move(value)});
  return *this;
}

class Substituter {
 public:
  explicit Substituter(const Substitution& s) : s_(s) {}

  Expr rewrite(const Expr& e) {
    Expr n = rewrite_poly(e.num());
    Expr d = rewrite_poly(e.den());
    return n / d;
  }

 private:
  Expr rewrite_poly(const Poly& p) {
    Expr total = Expr::zero();
    for (const auto& t : p.terms()) {
      Expr m = Expr::rational(t.coeff);
      for (const auto& [a, e] : t.mono.factors()) m = m * rewrite_atom(a).pow(e);
      total = total + m;
    }
    return total;
  }

  Expr rewrite_atom(const Atom& a) {
    switch (a.tag()) {
      case Atom::Tag::x:
        return Expr::variable(Var::x);
      case Atom::Tag::y:
        return Expr::variable(Var::y);
      case Atom::Tag::jet:
        return rewrite_jet(a.jetvar());
      case Atom::Tag::kernel: {
        Expr arg = rewrite(a.kernel_arg());
        return a.kernel_kind() == KernelKind::exp ? Expr::exp(arg) : Expr::ln(arg);
      }
    }
    return Expr::zero();
  }

  Expr rewrite_jet(const JetVar& v) {
    int match = -1;
    for (std::size_t i = 0; i < s_.bindings_.size(); ++i) {
      const auto& b = s_.bindings_[i];
      if (b.base.symbol == v.symbol && v.dx >= b.base.dx && v.dy >= b.base.dy) {
        if (match >= 0)
          throw DomainError("conflicting bindings for jet " +
                            atom_str(Atom::jet(v)));
        match = static_cast<int>(i);
      }
    }
    if (match < 0) return atom_expr(Atom::jet(v));
    const auto& b = s_.bindings_[static_cast<std::size_t>(match)];
    return derived(match, v.dx - b.base.dx, v.dy - b.base.dy);
  }

  Expr derived(int binding, int di, int dj) {
    auto key = std::make_tuple(binding, di, dj);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Expr value = s_.bindings_[static_cast<std::size_t>(binding)].value.diff(Var::x, di).diff(Var::y, dj);
    cache_.emplace(key, value);
    return value;
  }

  const Substitution& s_;
  std::map<std::tuple<int, int, int>, Expr> cache_;
};

Expr substitute(const Expr& e, const Substitution& s) {
  if (s.empty()) return e;
  return Substituter(s).rewrite(e);
}

}  // namespace wronsky
