#include "kontact/parse.hpp"

#include <cctype>
#include <string>

#include "kontact/errors.hpp"

namespace kontact {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& message) const {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_sum() {
    Expr acc = parse_product();
    while (true) {
      if (accept('+')) {
        acc = acc + parse_product();
      } else if (accept('-')) {
        acc = acc - parse_product();
      } else {
        return acc;
      }
    }
  }

  Expr parse_product() {
    Expr acc = parse_unary();
    while (true) {
      if (accept('*')) {
        acc = acc * parse_unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr d = parse_unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      const std::size_t at = pos_;
      Expr e = parse_unary();  // right associative, allows x^-1
      if (!e.is_constant()) {
        pos_ = at;
        fail("exponent must be a rational constant");
      }
      try {
        return pow(base, e.value());
      } catch (const DomainError&) {
        pos_ = at;
        fail("division by zero");
      }
    }
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(parse_number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string ident(text_.substr(start, pos_ - start));
      skip_space();
      const bool call = pos_ < text_.size() && text_[pos_] == '(';
      if (call && (ident == "exp" || ident == "log" || ident == "sqrt")) {
        ++pos_;
        const std::size_t at = pos_;
        Expr arg = parse_sum();
        expect(')');
        if (ident == "exp") return exp(arg);
        if (ident == "sqrt") return sqrt(arg);
        if (arg.is_constant() && sgn(arg.value()) <= 0) {
          pos_ = at;
          fail("log of a non-positive constant");
        }
        return log(arg);
      }
      if (call) fail("unknown function '" + ident + "'");
      return var(ident);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Rational parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string_view lit = text_.substr(start, pos_ - start);
    if (lit == ".") fail("malformed number");
    return decimal_to_rational(lit);
  }

 public:
  static Rational decimal_to_rational(std::string_view lit) {
    std::string mantissa;
    long exponent = 0;
    std::size_t i = 0;
    bool seen_dot = false;
    for (; i < lit.size() && lit[i] != 'e' && lit[i] != 'E'; ++i) {
      if (lit[i] == '.') {
        seen_dot = true;
      } else {
        mantissa.push_back(lit[i]);
        if (seen_dot) --exponent;
      }
    }
    if (i < lit.size()) exponent += std::stol(std::string(lit.substr(i + 1)));
    if (mantissa.empty()) mantissa = "0";
    Rational value{mpz_class(mantissa, 10)};
    mpz_class ten = 10;
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0) {
      value *= scale;
    } else {
      value /= scale;
    }
    value.canonicalize();
    return value;
  }
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse_all(); }

Rational parse_rational(std::string_view text) {
  Expr e = parse_expr(text);
  if (!e.is_constant()) throw ParseError("expected a rational constant", 1, 1);
  return e.value();
}

}  // namespace kontact
