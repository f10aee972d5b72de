#ifndef KONTACT_EXPR_HPP
#define KONTACT_EXPR_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kontact {

using Rational = mpq_class;

/// Immutable symbolic scalar over exact rationals.
///
/// Nodes are shared and never mutated. Constructors apply only light
/// simplification: sums and products are flattened and sorted, constants are
/// folded, like terms and like powers are merged, x^0 -> 1 and x^1 -> x.
/// Equality of two expressions in the mathematical sense is decided by
/// sampling (see sampling.hpp), not by canonical forms.
class Expr {
 public:
  enum class Kind { Constant, Variable, Sum, Product, Power, Exp, Log };

  Expr();  // the constant 0
  Expr(int v);  // NOLINT(google-explicit-constructor)
  Expr(long v);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& q);  // NOLINT(google-explicit-constructor)

  static Expr constant(const Rational& q);
  static Expr variable(const std::string& name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, const Rational& exponent);
  static Expr exp(const Expr& arg);
  static Expr log(const Expr& arg);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_zero() const;
  bool is_one() const;

  /// Constant value (Constant) or exponent (Power).
  const Rational& value() const;
  const Rational& exponent() const;
  const std::string& name() const;
  /// Terms of a Sum, factors of a Product, {base} of a Power, {arg} of Exp/Log.
  std::span<const Expr> operands() const;

  std::uint64_t hash() const;
  /// Bloom mask over the names of free variables; a clear bit proves absence.
  std::uint64_t variable_mask() const;

  /// Structural total order, used to sort operands.
  friend int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  std::string to_string() const;

  struct Node;  // defined in expr.cpp
  explicit Expr(std::shared_ptr<const Node> node);

 private:
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Rational& exponent);
Expr exp(const Expr& arg);
Expr log(const Expr& arg);
Expr sqrt(const Expr& arg);
Expr var(const std::string& name);

std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Sorted, de-duplicated free variable names.
std::vector<std::string> free_variables(const Expr& e);
bool depends_on(const Expr& e, const std::string& name);

/// d e / d name, by sum/product/chain rules. Zero when name does not occur.
Expr differentiate(const Expr& e, const std::string& name);

/// Simultaneous substitution; names absent from bindings are left alone.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

/// A numeric value tagged exact (rational) or inexact (binary float).
struct Number {
  bool exact = true;
  Rational q = 0;
  double d = 0.0;

  static Number rational(const Rational& v);
  static Number real(double v);
  double to_double() const { return exact ? q.get_d() : d; }
};

using Point = std::map<std::string, Number>;

/// Exact rational result when e is rational and p is rational, float
/// otherwise. Throws DomainError or UnboundVariable.
Number evaluate(const Expr& e, const Point& p);
double evaluate_double(const Expr& e, const Point& p);

/// Float value together with a magnitude bound of the intermediate terms.
/// Rounding error in the value is of order eps * scale.
struct ScaledValue {
  double value;
  double scale;
};
ScaledValue evaluate_scaled(const Expr& e, const Point& p);

/// Exact evaluation; nullopt when some subexpression is not rational.
std::optional<Rational> evaluate_exact(const Expr& e, const Point& p);

}  // namespace kontact

#endif  // KONTACT_EXPR_HPP
