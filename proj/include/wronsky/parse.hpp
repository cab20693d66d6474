#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "wronsky/expr.hpp"

namespace wronsky {

/// Expression grammar:
///
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := integer | 'x' | 'y' | ident jet-suffix?
///           | 'exp(' expr ')' | 'ln(' expr ')'
///           | 'diff(' expr ',' ('x'|'y') (',' ('x'|'y'))* ')'
///           | '(' expr ')'
///
/// A jet suffix is '_' followed by any mix of 'x'/'y' characters: a_xy and
/// diff(a,x,y) denote the same jet variable.  'Dx' and 'Dy' are reserved for
/// the operator format and rejected here.
struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
  enum class Kind {
    number,
    var,
    jet,
    neg,
    add,
    sub,
    mul,
    div,
    pow,
    exp,
    ln,
    diff,
  };

  Kind kind;
  Rat number;                  // number
  Var var = Var::x;            // var
  JetVar jetvar;               // jet
  AstPtr a, b;                 // operands; unary nodes use a only
  int exponent = 0;            // pow
  std::vector<Var> diff_vars;  // diff
};

AstPtr parse_ast(std::string_view text);

/// Normalized expression for an AST.
Expr lower(const Ast& ast);

/// parse + lower.  Throws ParseError with the offending position.
Expr parse_expr(std::string_view text);

/// One additive term of an operator in the text format
/// "coeff * Dx^i * Dy^j + ...": the accumulated multi-index and the scalar
/// coefficient.  Division by Dx/Dy is rejected.
struct OpTerm {
  int dx = 0;
  int dy = 0;
  Expr coeff;
};

std::vector<OpTerm> parse_operator_terms(std::string_view text);

}  // namespace wronsky
