#include "wronsky/parse.hpp"

#include <cctype>
#include <optional>
#include <string>

namespace wronsky {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::end;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': current_ = {Tok::plus, "+", pos_++}; return;
      case '-': current_ = {Tok::minus, "-", pos_++}; return;
      case '*': current_ = {Tok::star, "*", pos_++}; return;
      case '/': current_ = {Tok::slash, "/", pos_++}; return;
      case '^': current_ = {Tok::caret, "^", pos_++}; return;
      case '(': current_ = {Tok::lparen, "(", pos_++}; return;
      case ')': current_ = {Tok::rparen, ")", pos_++}; return;
      case ',': current_ = {Tok::comma, ",", pos_++}; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      current_ = {Tok::number, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_ = {Tok::ident, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    throw ParseError("unknown token '" + std::string(1, c) + "' at position " + std::to_string(pos_), pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

AstPtr make(Ast node) { return std::make_shared<Ast>(std::move(node)); }

AstPtr binary(Ast::Kind kind, AstPtr a, AstPtr b) {
  Ast n;
  n.kind = kind;
  n.a = std::move(a);
  n.b = std::move(b);
  return make(std::move(n));
}

// Splits an identifier into a function symbol and a jet suffix: the suffix
// begins at the first '_' after which only 'x'/'y' characters follow.
std::optional<JetVar> split_jet(const std::string& ident) {
  auto underscore = ident.find('_');
  while (underscore != std::string::npos) {
    std::string_view tail = std::string_view(ident).substr(underscore + 1);
    if (!tail.empty() && tail.find_first_not_of("xy") == std::string_view::npos) {
      JetVar v{ident.substr(0, underscore), 0, 0};
      for (char c : tail) (c == 'x' ? v.dx : v.dy)++;
      return v;
    }
    underscore = ident.find('_', underscore + 1);
  }
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  AstPtr parse_full() {
    AstPtr e = expr();
    expect_end();
    return e;
  }

  std::vector<OpTerm> parse_operator() {
    std::vector<OpTerm> terms;
    bool negate = false;
    if (lex_.peek().kind == Tok::minus) {
      lex_.next();
      negate = true;
    }
    terms.push_back(op_term(negate));
    while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
      bool minus = lex_.next().kind == Tok::minus;
      terms.push_back(op_term(minus));
    }
    expect_end();
    return terms;
  }

 private:
  void expect_end() {
    if (lex_.peek().kind != Tok::end)
      throw ParseError("unexpected input at position " + std::to_string(lex_.peek().pos),
                       lex_.peek().pos);
  }

  Token expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind)
      throw ParseError(std::string("expected ") + what + " at position " +
                           std::to_string(lex_.peek().pos),
                       lex_.peek().pos);
    return lex_.next();
  }

  AstPtr expr() {
    bool negate = false;
    if (lex_.peek().kind == Tok::minus) {
      lex_.next();
      negate = true;
    }
    AstPtr e = term();
    if (negate) {
      Ast n;
      n.kind = Ast::Kind::neg;
      n.a = std::move(e);
      e = make(std::move(n));
    }
    while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
      bool minus = lex_.next().kind == Tok::minus;
      e = binary(minus ? Ast::Kind::sub : Ast::Kind::add, e, term());
    }
    return e;
  }

  AstPtr term() {
    AstPtr e = factor();
    while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash) {
      bool div = lex_.next().kind == Tok::slash;
      e = binary(div ? Ast::Kind::div : Ast::Kind::mul, e, factor());
    }
    return e;
  }

  AstPtr factor() {
    AstPtr b = base();
    if (lex_.peek().kind == Tok::caret) {
      lex_.next();
      Ast n;
      n.kind = Ast::Kind::pow;
      n.a = std::move(b);
      n.exponent = integer_literal();
      return make(std::move(n));
    }
    return b;
  }

  int integer_literal() {
    bool neg = false;
    if (lex_.peek().kind == Tok::minus) {
      lex_.next();
      neg = true;
    }
    Token t = expect(Tok::number, "integer exponent");
    long v = std::stol(t.text);
    return static_cast<int>(neg ? -v : v);
  }

  AstPtr base() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::number: {
        Token n = lex_.next();
        Ast node;
        node.kind = Ast::Kind::number;
        node.number = Rat(Int(n.text));
        return make(std::move(node));
      }
      case Tok::lparen: {
        lex_.next();
        AstPtr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident:
        return ident_base(lex_.next());
      default:
        throw ParseError("syntax error at position " + std::to_string(t.pos), t.pos);
    }
  }

  AstPtr ident_base(const Token& t) {
    if (t.text == "x" || t.text == "y") {
      Ast node;
      node.kind = Ast::Kind::var;
      node.var = t.text == "x" ? Var::x : Var::y;
      return make(std::move(node));
    }
    if (t.text == "Dx" || t.text == "Dy")
      throw ParseError("'" + t.text + "' is reserved for operators (position " +
                           std::to_string(t.pos) + ")",
                       t.pos);
    if (t.text == "exp" || t.text == "ln") {
      expect(Tok::lparen, "'('");
      AstPtr arg = expr();
      expect(Tok::rparen, "')'");
      Ast node;
      node.kind = t.text == "exp" ? Ast::Kind::exp : Ast::Kind::ln;
      node.a = std::move(arg);
      return make(std::move(node));
    }
    if (t.text == "diff") {
      expect(Tok::lparen, "'('");
      Ast node;
      node.kind = Ast::Kind::diff;
      node.a = expr();
      do {
        expect(Tok::comma, "','");
        Token v = expect(Tok::ident, "'x' or 'y'");
        if (v.text == "x")
          node.diff_vars.push_back(Var::x);
        else if (v.text == "y")
          node.diff_vars.push_back(Var::y);
        else
          throw ParseError("expected 'x' or 'y' at position " + std::to_string(v.pos), v.pos);
      } while (lex_.peek().kind == Tok::comma);
      expect(Tok::rparen, "')'");
      return make(std::move(node));
    }
    Ast node;
    node.kind = Ast::Kind::jet;
    if (auto jet = split_jet(t.text))
      node.jetvar = *jet;
    else
      node.jetvar = JetVar{t.text, 0, 0};
    if (node.jetvar.symbol.empty())
      throw ParseError("bad identifier at position " + std::to_string(t.pos), t.pos);
    return make(std::move(node));
  }

  // One operator term: factors are Dx/Dy powers or scalar expression factors.
  OpTerm op_term(bool negate) {
    OpTerm out;
    out.coeff = negate ? -Expr::one() : Expr::one();
    bool first = true;
    for (;;) {
      const Token& t = lex_.peek();
      bool div = false;
      if (!first) {
        if (t.kind == Tok::star) {
          lex_.next();
        } else if (t.kind == Tok::slash) {
          lex_.next();
          div = true;
        } else {
          break;
        }
      }
      first = false;
      const Token& f = lex_.peek();
      if (f.kind == Tok::ident && (f.text == "Dx" || f.text == "Dy")) {
        Token d = lex_.next();
        if (div)
          throw ParseError("cannot divide by " + d.text + " (position " +
                               std::to_string(d.pos) + ")",
                           d.pos);
        int power = 1;
        if (lex_.peek().kind == Tok::caret) {
          lex_.next();
          power = integer_literal();
          if (power < 0)
            throw ParseError("negative power of " + d.text + " (position " +
                                 std::to_string(d.pos) + ")",
                             d.pos);
        }
        (d.text == "Dx" ? out.dx : out.dy) += power;
      } else {
        AstPtr e = factor();
        Expr value = lower(*e);
        out.coeff = div ? out.coeff / value : out.coeff * value;
      }
    }
    return out;
  }

  Lexer lex_;
};

}  // namespace

AstPtr parse_ast(std::string_view text) { return Parser(text).parse_full(); }

Expr lower(const Ast& ast) {
  switch (ast.kind) {
    case Ast::Kind::number:
      return Expr::rational(ast.number);
    case Ast::Kind::var:
      return Expr::variable(ast.var);
    case Ast::Kind::jet:
      return Expr::jet(ast.jetvar.symbol, ast.jetvar.dx, ast.jetvar.dy);
    case Ast::Kind::neg:
      return -lower(*ast.a);
    case Ast::Kind::add:
      return lower(*ast.a) + lower(*ast.b);
    case Ast::Kind::sub:
      return lower(*ast.a) - lower(*ast.b);
    case Ast::Kind::mul:
      return lower(*ast.a) * lower(*ast.b);
    case Ast::Kind::div:
      return lower(*ast.a) / lower(*ast.b);
    case Ast::Kind::pow:
      return lower(*ast.a).pow(ast.exponent);
    case Ast::Kind::exp:
      return Expr::exp(lower(*ast.a));
    case Ast::Kind::ln:
      return Expr::ln(lower(*ast.a));
    case Ast::Kind::diff: {
      Expr e = lower(*ast.a);
      for (Var v : ast.diff_vars) e = e.diff(v);
      return e;
    }
  }
  throw std::logic_error("unhandled AST node");
}

Expr parse_expr(std::string_view text) { return lower(*parse_ast(text)); }

std::vector<OpTerm> parse_operator_terms(std::string_view text) {
  return Parser(text).parse_operator();
}

}  // namespace wronsky
