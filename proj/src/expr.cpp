#include "kontact/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "kontact/errors.hpp"

namespace kontact {

struct Expr::Node {
  Kind kind;
  Rational value;  // Constant value, or Power exponent
  std::string name;
  std::vector<Expr> ops;
  std::uint64_t hash = 0;
  std::uint64_t mask = 0;
};

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t hash_rational(const Rational& q) {
  std::uint64_t h = kFnvOffset;
  h = mix(h, static_cast<std::uint64_t>(sgn(q) + 1));
  h = mix(h, mpz_fdiv_ui(q.get_num_mpz_t(), 4294967291UL));
  h = mix(h, mpz_fdiv_ui(q.get_den_mpz_t(), 4294967279UL));
  h = mix(h, mpz_sizeinbase(q.get_num_mpz_t(), 2));
  return h;
}

std::uint64_t name_bit(const std::string& name) { return 1ULL << (hash_string(name) % 64); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Exact q-th root of a non-negative integer, if it exists.
std::optional<mpz_class> exact_root(const mpz_class& v, unsigned long degree) {
  if (v < 0) return std::nullopt;
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), degree) == 0) return std::nullopt;
  return r;
}

Rational rational_pow(const Rational& base, long e) {
  if (e == 0) return 1;
  if (sgn(base) == 0) {
    if (e < 0) throw DomainError("division by zero");
    return 0;
  }
  const unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), ue);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), ue);
  Rational r = e > 0 ? Rational(num, den) : Rational(den, num);
  r.canonicalize();
  return r;
}

/// base^exponent when the result is rational; nullopt otherwise.
std::optional<Rational> rational_power(const Rational& base, const Rational& exponent) {
  if (!exponent.get_num().fits_slong_p() || !exponent.get_den().fits_ulong_p()) {
    return std::nullopt;
  }
  const long num = exponent.get_num().get_si();
  const unsigned long den = exponent.get_den().get_ui();
  if (den == 1) return rational_pow(base, num);
  if (sgn(base) < 0) return std::nullopt;
  if (sgn(base) == 0) {
    if (num < 0) throw DomainError("division by zero");
    return Rational(0);
  }
  auto rn = exact_root(base.get_num(), den);
  auto rd = exact_root(base.get_den(), den);
  if (!rn || !rd) return std::nullopt;
  Rational root(*rn, *rd);
  root.canonicalize();
  return rational_pow(root, num);
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(int v) : Expr(Rational(v)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}

Expr::Expr(const Rational& q) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  // mpq assignment misbehaves on a non-canonical negative denominator.
  n->value = Rational(mpz_class(q.get_num_mpz_t()), mpz_class(q.get_den_mpz_t()));
  n->value.canonicalize();
  n->hash = mix(hash_rational(n->value), 1);
  n->mask = 0;
  node_ = std::move(n);
}

Expr Expr::constant(const Rational& q) { return Expr(q); }

Expr Expr::variable(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = name;
  n->hash = mix(hash_string(name), 2);
  n->mask = name_bit(name);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

namespace {

std::shared_ptr<Expr::Node> raw_node(Expr::Kind kind, std::vector<Expr> ops, const Rational& value = 0) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->value = value;
  std::uint64_t h = mix(kFnvOffset, static_cast<std::uint64_t>(kind) + 16);
  if (kind == Expr::Kind::Power) h = mix(h, hash_rational(value));
  std::uint64_t mask = 0;
  for (const auto& o : ops) {
    h = mix(h, o.hash());
    mask |= o.variable_mask();
  }
  n->hash = h;
  n->mask = mask;
  n->ops = std::move(ops);
  return n;
}

}  // namespace

Expr::Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Constant && sgn(node_->value) == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Constant && node_->value == 1; }
const Rational& Expr::value() const { return node_->value; }
const Rational& Expr::exponent() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::operands() const { return node_->ops; }
std::uint64_t Expr::hash() const { return node_->hash; }
std::uint64_t Expr::variable_mask() const { return node_->mask; }

int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Expr::Kind::Constant:
      return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case Expr::Kind::Variable:
      return a.name() < b.name() ? -1 : (a.name() > b.name() ? 1 : 0);
    case Expr::Kind::Power: {
      const int c = compare(a.operands()[0], b.operands()[0]);
      if (c != 0) return c;
      const int ce = cmp(a.exponent(), b.exponent());
      return ce < 0 ? -1 : (ce > 0 ? 1 : 0);
    }
    default: {
      const auto ao = a.operands();
      const auto bo = b.operands();
      const std::size_t n = std::min(ao.size(), bo.size());
      for (std::size_t i = 0; i < n; ++i) {
        const int c = compare(ao[i], bo[i]);
        if (c != 0) return c;
      }
      if (ao.size() != bo.size()) return ao.size() < bo.size() ? -1 : 1;
      return 0;
    }
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

namespace {

bool less_expr(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

/// Split a term into rational coefficient and remaining monomial; the
/// monomial is nullopt for a pure constant.
std::pair<Rational, std::optional<Expr>> split_coefficient(const Expr& t) {
  if (t.is_constant()) return {t.value(), std::nullopt};
  if (t.kind() == Expr::Kind::Product && t.operands()[0].is_constant()) {
    const auto ops = t.operands();
    if (ops.size() == 2) return {ops[0].value(), ops[1]};
    std::vector<Expr> rest(ops.begin() + 1, ops.end());
    return {ops[0].value(), Expr::product(std::move(rest))};
  }
  return {1, t};
}

Expr scale_monomial(const Rational& c, const Expr& m) {
  if (c == 1) return m;
  if (m.kind() == Expr::Kind::Product) {
    std::vector<Expr> ops;
    ops.reserve(m.operands().size() + 1);
    ops.emplace_back(c);
    for (const auto& o : m.operands()) ops.push_back(o);
    return Expr::product(std::move(ops));
  }
  return Expr::product({Expr(c), m});
}

std::pair<Expr, Rational> split_power(const Expr& f) {
  if (f.kind() == Expr::Kind::Power) return {f.operands()[0], f.exponent()};
  return {f, 1};
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      for (const auto& s : t.operands()) flat.push_back(s);
    } else if (!t.is_zero()) {
      flat.push_back(std::move(t));
    }
  }
  if (flat.empty()) return Expr(0);
  if (flat.size() == 1) return flat[0];

  Rational constant = 0;
  std::vector<std::pair<Expr, Rational>> monomials;
  monomials.reserve(flat.size());
  for (const auto& t : flat) {
    auto [c, m] = split_coefficient(t);
    if (!m) {
      constant += c;
    } else {
      monomials.emplace_back(*m, c);
    }
  }
  std::sort(monomials.begin(), monomials.end(),
            [](const auto& a, const auto& b) { return less_expr(a.first, b.first); });
  std::vector<Expr> out;
  out.reserve(monomials.size() + 1);
  if (sgn(constant) != 0) out.emplace_back(constant);
  for (std::size_t i = 0; i < monomials.size();) {
    std::size_t j = i;
    Rational c = 0;
    while (j < monomials.size() && monomials[j].first == monomials[i].first) {
      c += monomials[j].second;
      ++j;
    }
    if (sgn(c) != 0) out.push_back(scale_monomial(c, monomials[i].first));
    i = j;
  }
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out[0];
  return Expr(std::shared_ptr<const Node>(raw_node(Kind::Sum, std::move(out))));
}

Expr Expr::product(std::vector<Expr> factors) {
  Rational coeff = 1;
  std::vector<std::pair<Expr, Rational>> powers;
  std::function<void(const Expr&)> absorb = [&](const Expr& f) {
    if (f.is_constant()) {
      coeff *= f.value();
    } else if (f.kind() == Kind::Product) {
      for (const auto& g : f.operands()) absorb(g);
    } else {
      powers.push_back(split_power(f));
    }
  };
  for (const auto& f : factors) absorb(f);
  if (sgn(coeff) == 0) return Expr(0);

  std::sort(powers.begin(), powers.end(),
            [](const auto& a, const auto& b) { return less_expr(a.first, b.first); });
  std::vector<Expr> out;
  bool reshape = false;
  for (std::size_t i = 0; i < powers.size();) {
    std::size_t j = i;
    Rational e = 0;
    while (j < powers.size() && powers[j].first == powers[i].first) {
      e += powers[j].second;
      ++j;
    }
    if (sgn(e) != 0) {
      Expr f = Expr::power(powers[i].first, e);
      if (f.is_constant() || f.kind() == Kind::Product) reshape = true;
      out.push_back(std::move(f));
    }
    i = j;
  }
  if (reshape) {
    out.emplace_back(coeff);
    return Expr::product(std::move(out));
  }
  std::sort(out.begin(), out.end(), less_expr);
  if (out.empty()) return Expr(coeff);
  if (coeff == 1 && out.size() == 1) return out[0];
  if (out.size() == 1 && out[0].kind() == Kind::Sum) {
    // c * (a + b) -> c*a + c*b, so that negated sums cancel term by term
    std::vector<Expr> terms;
    for (const auto& t : out[0].operands()) terms.push_back(Expr::product({Expr(coeff), t}));
    return Expr::sum(std::move(terms));
  }
  if (coeff != 1) out.insert(out.begin(), Expr(coeff));
  return Expr(std::shared_ptr<const Node>(raw_node(Kind::Product, std::move(out))));
}

Expr Expr::power(const Expr& base, const Rational& exponent) {
  Rational e = exponent;
  e.canonicalize();
  if (sgn(e) == 0) return Expr(1);
  if (e == 1) return base;
  switch (base.kind()) {
    case Kind::Constant: {
      if (auto r = rational_power(base.value(), e)) return Expr(*r);
      break;
    }
    case Kind::Power:
      if (is_integer(e)) return Expr::power(base.operands()[0], base.exponent() * e);
      break;
    case Kind::Product:
      if (is_integer(e)) {
        std::vector<Expr> fs;
        for (const auto& f : base.operands()) fs.push_back(Expr::power(f, e));
        return Expr::product(std::move(fs));
      }
      break;
    case Kind::Exp:
      return Expr::exp(Expr::product({Expr(e), base.operands()[0]}));
    default:
      break;
  }
  return Expr(std::shared_ptr<const Node>(raw_node(Kind::Power, {base}, e)));
}

Expr Expr::exp(const Expr& arg) {
  if (arg.is_zero()) return Expr(1);
  if (arg.kind() == Kind::Log) return arg.operands()[0];
  return Expr(std::shared_ptr<const Node>(raw_node(Kind::Exp, {arg})));
}

Expr Expr::log(const Expr& arg) {
  if (arg.is_one()) return Expr(0);
  if (arg.kind() == Kind::Exp) return arg.operands()[0];
  return Expr(std::shared_ptr<const Node>(raw_node(Kind::Log, {arg})));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::product({Expr(-1), b})}); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  return Expr::product({a, Expr::power(b, -1)});
}
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Rational& exponent) { return Expr::power(base, exponent); }
Expr exp(const Expr& arg) { return Expr::exp(arg); }
Expr log(const Expr& arg) { return Expr::log(arg); }
Expr sqrt(const Expr& arg) { return Expr::power(arg, Rational(1, 2)); }
Expr var(const std::string& name) { return Expr::variable(name); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string rational_string(const Rational& q) { return q.get_str(); }

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

Prec precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      if (sgn(e.value()) < 0) return kUnary;
      return is_integer(e.value()) ? kAtom : kProduct;
    case Expr::Kind::Variable:
    case Expr::Kind::Exp:
    case Expr::Kind::Log:
      return kAtom;
    case Expr::Kind::Sum:
      return kSum;
    case Expr::Kind::Product:
      return e.operands()[0].is_constant() && sgn(e.operands()[0].value()) < 0 ? kUnary : kProduct;
    case Expr::Kind::Power:
      return kPower;
  }
  return kAtom;
}

void print(std::ostream& os, const Expr& e);

void print_wrapped(std::ostream& os, const Expr& e, Prec min) {
  if (precedence(e) < min) {
    os << '(';
    print(os, e);
    os << ')';
  } else {
    print(os, e);
  }
}

void print(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      os << rational_string(e.value());
      return;
    case Expr::Kind::Variable:
      os << e.name();
      return;
    case Expr::Kind::Exp:
      os << "exp(";
      print(os, e.operands()[0]);
      os << ')';
      return;
    case Expr::Kind::Log:
      os << "log(";
      print(os, e.operands()[0]);
      os << ')';
      return;
    case Expr::Kind::Power: {
      print_wrapped(os, e.operands()[0], kAtom);
      os << '^';
      const Rational& x = e.exponent();
      if (is_integer(x) && sgn(x) > 0) {
        os << rational_string(x);
      } else {
        os << '(' << rational_string(x) << ')';
      }
      return;
    }
    case Expr::Kind::Sum: {
      bool first = true;
      for (const auto& t : e.operands()) {
        auto [c, m] = split_coefficient(t);
        const bool negative = sgn(c) < 0;
        if (first) {
          if (negative) os << '-';
        } else {
          os << (negative ? " - " : " + ");
        }
        const Rational a = abs(c);
        if (!m) {
          os << rational_string(a);
        } else if (a == 1) {
          print_wrapped(os, *m, kProduct);
        } else {
          os << rational_string(a) << '*';
          print_wrapped(os, *m, kPower);
        }
        first = false;
      }
      return;
    }
    case Expr::Kind::Product: {
      const auto ops = e.operands();
      std::size_t start = 0;
      if (ops[0].is_constant()) {
        const Rational& c = ops[0].value();
        if (c == -1) {
          os << '-';
        } else {
          os << rational_string(c) << '*';
        }
        start = 1;
      }
      for (std::size_t i = start; i < ops.size(); ++i) {
        if (i > start) os << '*';
        print_wrapped(os, ops[i], kPower);
      }
      return;
    }
  }
}

}  // namespace

std::string Expr::to_string() const {
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.to_string(); }

// ---------------------------------------------------------------------------
// Structure queries

namespace {

void collect_variables(const Expr& e, std::set<std::string>& out) {
  if (e.variable_mask() == 0) return;
  if (e.is_variable()) {
    out.insert(e.name());
    return;
  }
  for (const auto& o : e.operands()) collect_variables(o, out);
}

}  // namespace

std::vector<std::string> free_variables(const Expr& e) {
  std::set<std::string> s;
  collect_variables(e, s);
  return {s.begin(), s.end()};
}

bool depends_on(const Expr& e, const std::string& name) {
  if ((e.variable_mask() & name_bit(name)) == 0) return false;
  if (e.is_variable()) return e.name() == name;
  for (const auto& o : e.operands()) {
    if (depends_on(o, name)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Calculus

Expr differentiate(const Expr& e, const std::string& v) {
  if ((e.variable_mask() & name_bit(v)) == 0) return Expr(0);
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return Expr(0);
    case Expr::Kind::Variable:
      return Expr(e.name() == v ? 1 : 0);
    case Expr::Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& t : e.operands()) terms.push_back(differentiate(t, v));
      return Expr::sum(std::move(terms));
    }
    case Expr::Kind::Product: {
      const auto ops = e.operands();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Expr di = differentiate(ops[i], v);
        if (di.is_zero()) continue;
        std::vector<Expr> fs;
        fs.reserve(ops.size());
        for (std::size_t j = 0; j < ops.size(); ++j) fs.push_back(j == i ? di : ops[j]);
        terms.push_back(Expr::product(std::move(fs)));
      }
      return Expr::sum(std::move(terms));
    }
    case Expr::Kind::Power: {
      const Expr& b = e.operands()[0];
      Expr db = differentiate(b, v);
      if (db.is_zero()) return Expr(0);
      return Expr::product({Expr(e.exponent()), Expr::power(b, e.exponent() - 1), db});
    }
    case Expr::Kind::Exp: {
      Expr da = differentiate(e.operands()[0], v);
      if (da.is_zero()) return Expr(0);
      return Expr::product({e, da});
    }
    case Expr::Kind::Log: {
      const Expr& a = e.operands()[0];
      Expr da = differentiate(a, v);
      if (da.is_zero()) return Expr(0);
      return Expr::product({da, Expr::power(a, -1)});
    }
  }
  return Expr(0);
}

namespace {

Expr substitute_impl(const Expr& e, const std::map<std::string, Expr>& b, std::uint64_t mask) {
  if ((e.variable_mask() & mask) == 0) return e;
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e;
    case Expr::Kind::Variable: {
      auto it = b.find(e.name());
      return it == b.end() ? e : it->second;
    }
    case Expr::Kind::Sum:
    case Expr::Kind::Product: {
      std::vector<Expr> ops;
      ops.reserve(e.operands().size());
      for (const auto& o : e.operands()) ops.push_back(substitute_impl(o, b, mask));
      return e.kind() == Expr::Kind::Sum ? Expr::sum(std::move(ops)) : Expr::product(std::move(ops));
    }
    case Expr::Kind::Power:
      return Expr::power(substitute_impl(e.operands()[0], b, mask), e.exponent());
    case Expr::Kind::Exp:
      return Expr::exp(substitute_impl(e.operands()[0], b, mask));
    case Expr::Kind::Log:
      return Expr::log(substitute_impl(e.operands()[0], b, mask));
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  std::uint64_t mask = 0;
  for (const auto& [name, _] : bindings) mask |= name_bit(name);
  return substitute_impl(e, bindings, mask);
}

// ---------------------------------------------------------------------------
// Evaluation

Number Number::rational(const Rational& v) {
  Number n;
  n.exact = true;
  n.q = v;
  n.d = v.get_d();
  return n;
}

Number Number::real(double v) {
  Number n;
  n.exact = false;
  n.d = v;
  return n;
}

namespace {

const Number& lookup(const Point& p, const std::string& name) {
  auto it = p.find(name);
  if (it == p.end()) throw UnboundVariable("unbound variable '" + name + "'");
  return it->second;
}

struct NotRational {};

Rational exact_impl(const Expr& e, const Point& p) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.value();
    case Expr::Kind::Variable: {
      const Number& n = lookup(p, e.name());
      if (!n.exact) throw NotRational{};
      return n.q;
    }
    case Expr::Kind::Sum: {
      Rational s = 0;
      for (const auto& t : e.operands()) s += exact_impl(t, p);
      return s;
    }
    case Expr::Kind::Product: {
      Rational s = 1;
      for (const auto& t : e.operands()) s *= exact_impl(t, p);
      return s;
    }
    case Expr::Kind::Power: {
      Rational b = exact_impl(e.operands()[0], p);
      if (sgn(b) < 0 && !is_integer(e.exponent())) {
        throw DomainError("fractional power of a negative number");
      }
      if (auto r = rational_power(b, e.exponent())) return *r;
      throw NotRational{};
    }
    case Expr::Kind::Exp: {
      Rational a = exact_impl(e.operands()[0], p);
      if (sgn(a) == 0) return 1;
      throw NotRational{};
    }
    case Expr::Kind::Log: {
      Rational a = exact_impl(e.operands()[0], p);
      if (sgn(a) <= 0) throw DomainError("log of a non-positive number");
      if (a == 1) return 0;
      throw NotRational{};
    }
  }
  throw NotRational{};
}

double checked(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite intermediate value");
  return v;
}

ScaledValue scaled_impl(const Expr& e, const Point& p) {
  switch (e.kind()) {
    case Expr::Kind::Constant: {
      const double v = e.value().get_d();
      return {v, std::abs(v)};
    }
    case Expr::Kind::Variable: {
      const double v = lookup(p, e.name()).to_double();
      return {v, std::abs(v)};
    }
    case Expr::Kind::Sum: {
      double s = 0.0, m = 0.0;
      for (const auto& t : e.operands()) {
        auto r = scaled_impl(t, p);
        s += r.value;
        m += r.scale;
      }
      return {checked(s), m};
    }
    case Expr::Kind::Product: {
      double s = 1.0, m = 1.0;
      for (const auto& t : e.operands()) {
        auto r = scaled_impl(t, p);
        s *= r.value;
        m *= r.scale;
      }
      return {checked(s), m};
    }
    case Expr::Kind::Power: {
      auto b = scaled_impl(e.operands()[0], p);
      const double x = e.exponent().get_d();
      const bool integral = is_integer(e.exponent());
      if (b.value < 0 && !integral) throw DomainError("fractional power of a negative number");
      if (b.value == 0 && x < 0) throw DomainError("division by zero");
      const double v = checked(std::pow(b.value, x));
      double m = std::abs(v);
      if (b.value != 0) m += std::abs(x) * std::abs(v / b.value) * b.scale;
      return {v, checked(m)};
    }
    case Expr::Kind::Exp: {
      auto a = scaled_impl(e.operands()[0], p);
      const double v = checked(std::exp(a.value));
      return {v, v * (1.0 + a.scale)};
    }
    case Expr::Kind::Log: {
      auto a = scaled_impl(e.operands()[0], p);
      if (a.value <= 0) throw DomainError("log of a non-positive number");
      const double v = std::log(a.value);
      return {v, std::abs(v) + a.scale / a.value};
    }
  }
  return {0.0, 0.0};
}

}  // namespace

std::optional<Rational> evaluate_exact(const Expr& e, const Point& p) {
  try {
    return exact_impl(e, p);
  } catch (const NotRational&) {
    return std::nullopt;
  }
}

ScaledValue evaluate_scaled(const Expr& e, const Point& p) { return scaled_impl(e, p); }

double evaluate_double(const Expr& e, const Point& p) { return scaled_impl(e, p).value; }

Number evaluate(const Expr& e, const Point& p) {
  if (auto q = evaluate_exact(e, p)) return Number::rational(*q);
  return Number::real(evaluate_double(e, p));
}

}  // namespace kontact
