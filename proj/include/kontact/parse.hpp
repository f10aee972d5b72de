#ifndef KONTACT_PARSE_HPP
#define KONTACT_PARSE_HPP

#include <string_view>

#include "kontact/expr.hpp"

namespace kontact {

/// Parse the infix expression grammar shared by definition files and the CLI:
/// `+ - * / ^`, `exp( ) log( ) sqrt( )`, integer/decimal/rational literals and
/// identifiers `[A-Za-z_][A-Za-z0-9_]*`. Exponents must reduce to rational
/// constants. Throws ParseError with a 1-based line and column.
Expr parse_expr(std::string_view text);

/// Parse a rational literal such as `3/2`, `-4`, `0.25` or `1e-3`.
Rational parse_rational(std::string_view text);

}  // namespace kontact

#endif  // KONTACT_PARSE_HPP
