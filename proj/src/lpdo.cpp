#include "wronsky/lpdo.hpp"

#include <algorithm>
#include <sstream>

#include "wronsky/parse.hpp"

namespace wronsky {

bool operator==(DiffIndex a, DiffIndex b) { return a.dx == b.dx && a.dy == b.dy; }

bool operator<(DiffIndex a, DiffIndex b) {
  if (a.dx != b.dx) return a.dx < b.dx;
  return a.dy < b.dy;
}

LPDO LPDO::identity() { return term(Expr::one(), 0, 0); }
LPDO LPDO::dx() { return term(Expr::one(), 1, 0); }
LPDO LPDO::dy() { return term(Expr::one(), 0, 1); }

LPDO LPDO::term(Expr coeff, int dx, int dy) {
  LPDO op;
  op.add_term(dx, dy, coeff);
  return op;
}

int LPDO::order() const {
  int d = -1;
  for (const auto& [idx, c] : terms_) d = std::max(d, idx.dx + idx.dy);
  return d;
}

Expr LPDO::coeff(int dx, int dy) const {
  auto it = terms_.find(DiffIndex{dx, dy});
  return it == terms_.end() ? Expr::zero() : it->second;
}

void LPDO::add_term(int dx, int dy, const Expr& c) {
  if (c.is_zero()) return;
  DiffIndex idx{dx, dy};
  auto it = terms_.find(idx);
  if (it == terms_.end()) {
    terms_.emplace(idx, c);
    return;
  }
  Expr sum = it->second + c;
  if (sum.is_zero())
    terms_.erase(it);
  else
    it->second = sum;
}

bool operator==(const LPDO& a, const LPDO& b) {
  if (a.terms().size() != b.terms().size()) return false;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first) || ia->second != ib->second) return false;
  }
  return true;
}

bool operator!=(const LPDO& a, const LPDO& b) { return !(a == b); }

namespace {

long binomial(int n, int k) {
  long out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Indices in display order: descending total order, then descending dx.
std::vector<DiffIndex> display_order(const LPDO& a) {
  std::vector<DiffIndex> idx;
  idx.reserve(a.terms().size());
  for (const auto& [i, c] : a.terms()) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [](DiffIndex s, DiffIndex t) {
    int os = s.dx + s.dy, ot = t.dx + t.dy;
    if (os != ot) return os > ot;
    return s.dx > t.dx;
  });
  return idx;
}

std::string d_part(DiffIndex idx) {
  std::string s;
  if (idx.dx > 0) {
    s += "Dx";
    if (idx.dx > 1) s += "^" + std::to_string(idx.dx);
  }
  if (idx.dy > 0) {
    if (!s.empty()) s += "*";
    s += "Dy";
    if (idx.dy > 1) s += "^" + std::to_string(idx.dy);
  }
  return s;
}

bool leading_negative(const Expr& e) { return e.num().leading().coeff < 0; }

std::string coeff_str(const Expr& c) {
  std::string s = c.str();
  if (c.num().terms().size() > 1) return "(" + s + ")";
  return s;
}

}  // namespace

std::string LPDO::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (DiffIndex idx : display_order(*this)) {
    Expr c = coeff(idx.dx, idx.dy);
    bool neg = leading_negative(c);
    Expr mag = neg ? -c : c;
    std::string ds = d_part(idx);
    std::string body;
    if (ds.empty())
      body = coeff_str(mag);
    else if (mag.is_one())
      body = ds;
    else
      body = coeff_str(mag) + "*" + ds;
    if (first) {
      os << (neg ? "-" : "") << body;
      first = false;
    } else {
      os << (neg ? " - " : " + ") << body;
    }
  }
  return os.str();
}

LPDO compose(const LPDO& a, const LPDO& b) {
  LPDO out;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      // Precompute the mixed partials of cb up to (ia.dx, ia.dy).
      std::vector<std::vector<Expr>> d(static_cast<std::size_t>(ia.dx) + 1);
      for (int k = 0; k <= ia.dx; ++k) {
        d[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(ia.dy) + 1);
        d[static_cast<std::size_t>(k)][0] =
            k == 0 ? cb : d[static_cast<std::size_t>(k - 1)][0].diff(Var::x);
        for (int l = 1; l <= ia.dy; ++l)
          d[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
              d[static_cast<std::size_t>(k)][static_cast<std::size_t>(l - 1)].diff(Var::y);
      }
      for (int k = 0; k <= ia.dx; ++k) {
        for (int l = 0; l <= ia.dy; ++l) {
          const Expr& dcb = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
          if (dcb.is_zero()) continue;
          Expr coeff = ca * dcb * Expr::integer(binomial(ia.dx, k) * binomial(ia.dy, l));
          out.add_term(ia.dx - k + ib.dx, ia.dy - l + ib.dy, coeff);
        }
      }
    }
  }
  return out;
}

LPDO linear_combine(const std::vector<std::pair<Expr, LPDO>>& parts) {
  LPDO out;
  for (const auto& [c, op] : parts)
    for (const auto& [idx, oc] : op.terms()) out.add_term(idx.dx, idx.dy, c * oc);
  return out;
}

LPDO operator+(const LPDO& a, const LPDO& b) {
  LPDO out = a;
  for (const auto& [idx, c] : b.terms()) out.add_term(idx.dx, idx.dy, c);
  return out;
}

LPDO operator-(const LPDO& a, const LPDO& b) {
  LPDO out = a;
  for (const auto& [idx, c] : b.terms()) out.add_term(idx.dx, idx.dy, -c);
  return out;
}

LPDO operator*(const Expr& c, const LPDO& a) { return linear_combine({{c, a}}); }

Expr apply(const LPDO& a, const Expr& f) {
  Expr out = Expr::zero();
  for (const auto& [idx, c] : a.terms())
    out = out + c * f.diff(Var::x, idx.dx).diff(Var::y, idx.dy);
  return out;
}

LPDO gauge(const LPDO& a, const Expr& alpha) {
  Expr ax = alpha.diff(Var::x);
  Expr ay = alpha.diff(Var::y);
  LPDO gx = LPDO::dx() + LPDO::term(ax, 0, 0);
  LPDO gy = LPDO::dy() + LPDO::term(ay, 0, 0);
  int max_dx = 0, max_dy = 0;
  for (const auto& [idx, c] : a.terms()) {
    max_dx = std::max(max_dx, idx.dx);
    max_dy = std::max(max_dy, idx.dy);
  }
  std::vector<LPDO> px{LPDO::identity()}, py{LPDO::identity()};
  for (int i = 1; i <= max_dx; ++i) px.push_back(compose(gx, px.back()));
  for (int j = 1; j <= max_dy; ++j) py.push_back(compose(gy, py.back()));
  LPDO out;
  for (const auto& [idx, c] : a.terms()) {
    LPDO part = compose(px[static_cast<std::size_t>(idx.dx)], py[static_cast<std::size_t>(idx.dy)]);
    for (const auto& [pidx, pc] : part.terms()) out.add_term(pidx.dx, pidx.dy, c * pc);
  }
  return out;
}

LPDO conjugate(const LPDO& a, const Expr& p) {
  if (p.is_zero()) throw DomainError("conjugation by zero");
  return compose(LPDO::term(p, 0, 0), compose(a, LPDO::term(Expr::one() / p, 0, 0)));
}

bool operator==(const SymbolPoly& a, const SymbolPoly& b) {
  if (a.order != b.order || a.terms.size() != b.terms.size()) return false;
  auto ia = a.terms.begin();
  auto ib = b.terms.begin();
  for (; ia != a.terms.end(); ++ia, ++ib)
    if (!(ia->first == ib->first) || ia->second != ib->second) return false;
  return true;
}

SymbolPoly mul(const SymbolPoly& a, const SymbolPoly& b) {
  SymbolPoly out;
  out.order = a.order + b.order;
  for (const auto& [ia, ca] : a.terms)
    for (const auto& [ib, cb] : b.terms) {
      DiffIndex idx{ia.dx + ib.dx, ia.dy + ib.dy};
      Expr sum = out.terms.count(idx) ? out.terms[idx] + ca * cb : ca * cb;
      if (sum.is_zero())
        out.terms.erase(idx);
      else
        out.terms[idx] = sum;
    }
  return out;
}

SymbolPoly symbol_of(const LPDO& a) {
  if (a.is_zero()) throw DomainError("symbol of the zero operator");
  SymbolPoly out;
  out.order = a.order();
  for (const auto& [idx, c] : a.terms())
    if (idx.dx + idx.dy == out.order) out.terms.emplace(idx, c);
  return out;
}

std::string SymbolPoly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  std::vector<DiffIndex> idx;
  for (const auto& [i, c] : terms) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [](DiffIndex s, DiffIndex t) { return s.dx > t.dx; });
  for (DiffIndex i : idx) {
    const Expr& c = terms.at(i);
    bool neg = leading_negative(c);
    Expr mag = neg ? -c : c;
    std::string xy;
    if (i.dx > 0) {
      xy += "X";
      if (i.dx > 1) xy += "^" + std::to_string(i.dx);
    }
    if (i.dy > 0) {
      if (!xy.empty()) xy += "*";
      xy += "Y";
      if (i.dy > 1) xy += "^" + std::to_string(i.dy);
    }
    std::string body;
    if (xy.empty())
      body = coeff_str(mag);
    else if (mag.is_one())
      body = xy;
    else
      body = coeff_str(mag) + "*" + xy;
    if (first) {
      os << (neg ? "-" : "") << body;
      first = false;
    } else {
      os << (neg ? " - " : " + ") << body;
    }
  }
  return os.str();
}

LPDO parse_lpdo(std::string_view text) {
  LPDO out;
  for (const OpTerm& t : parse_operator_terms(text)) out.add_term(t.dx, t.dy, t.coeff);
  return out;
}

}  // namespace wronsky
