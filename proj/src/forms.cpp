#include "kontact/forms.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "kontact/errors.hpp"

namespace kontact {

// ---------------------------------------------------------------------------
// Chart

struct Chart::Data {
  std::vector<std::string> coordinates;
  std::map<std::string, int> index;
  std::vector<Expr> constraints;
  std::map<std::string, std::pair<Rational, Rational>> ranges;
};

Chart::Chart() : data_(std::make_shared<Data>()) {}

Chart::Chart(std::vector<std::string> coordinates, std::vector<Expr> constraints,
             std::map<std::string, std::pair<Rational, Rational>> ranges) {
  auto d = std::make_shared<Data>();
  if (coordinates.empty()) throw InvalidArgument("a chart needs at least one coordinate");
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (!d->index.emplace(coordinates[i], static_cast<int>(i)).second) {
      throw InvalidArgument("duplicate coordinate '" + coordinates[i] + "'");
    }
  }
  d->coordinates = std::move(coordinates);
  d->constraints = std::move(constraints);
  d->ranges = std::move(ranges);
  data_ = std::move(d);
}

const std::vector<std::string>& Chart::coordinates() const { return data_->coordinates; }
int Chart::dim() const { return static_cast<int>(data_->coordinates.size()); }
const std::vector<Expr>& Chart::constraints() const { return data_->constraints; }
const std::map<std::string, std::pair<Rational, Rational>>& Chart::ranges() const {
  return data_->ranges;
}

std::optional<int> Chart::find(const std::string& name) const {
  auto it = data_->index.find(name);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

int Chart::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw InvalidArgument("'" + name + "' is not a coordinate of this chart");
}

SampleDomain Chart::domain() const {
  SampleDomain d;
  d.variables = data_->coordinates;
  d.ranges = data_->ranges;
  d.constraints = data_->constraints;
  return d;
}

bool operator==(const Chart& a, const Chart& b) {
  return a.data_ == b.data_ || a.data_->coordinates == b.data_->coordinates;
}

void require_same_chart(const Chart& a, const Chart& b) {
  if (a != b) throw ChartMismatch("objects live on different charts");
}

SampleDomain domain_for(const Chart& chart, const std::vector<Expr>& exprs) {
  SampleDomain d = chart.domain();
  for (const auto& e : exprs) d.add_variables(free_variables(e));
  return d;
}

// ---------------------------------------------------------------------------
// Forms

int sort_with_parity(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

DifferentialForm::DifferentialForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0) throw InvalidArgument("negative form degree");
}

DifferentialForm DifferentialForm::scalar(const Chart& chart, const Expr& f) {
  DifferentialForm out(chart, 0);
  out.add({}, f);
  return out;
}

DifferentialForm DifferentialForm::basis(const Chart& chart, const std::string& coordinate) {
  DifferentialForm out(chart, 1);
  out.add({chart.index_of(coordinate)}, 1);
  return out;
}

DifferentialForm DifferentialForm::one_form(const Chart& chart, const std::vector<Expr>& coefficients) {
  if (static_cast<int>(coefficients.size()) != chart.dim()) {
    throw LengthMismatch("one-form needs one coefficient per coordinate");
  }
  DifferentialForm out(chart, 1);
  for (int i = 0; i < chart.dim(); ++i) out.add({i}, coefficients[static_cast<std::size_t>(i)]);
  return out;
}

Expr DifferentialForm::coeff(Key idx) const {
  if (static_cast<int>(idx.size()) != degree_) throw InvalidArgument("index tuple has the wrong length");
  const int sign = sort_with_parity(idx);
  if (sign == 0) return 0;
  auto it = terms_.find(idx);
  if (it == terms_.end()) return 0;
  return sign > 0 ? it->second : -it->second;
}

void DifferentialForm::add(Key idx, const Expr& c) {
  if (static_cast<int>(idx.size()) != degree_) throw InvalidArgument("index tuple has the wrong length");
  for (int i : idx) {
    if (i < 0 || i >= chart_.dim()) throw InvalidArgument("index outside the chart");
  }
  if (c.is_zero()) return;
  const int sign = sort_with_parity(idx);
  if (sign == 0) return;
  auto it = terms_.find(idx);
  Expr v = sign > 0 ? c : -c;
  if (it == terms_.end()) {
    terms_.emplace(std::move(idx), v);
    return;
  }
  it->second = it->second + v;
  if (it->second.is_zero()) terms_.erase(it);
}

DifferentialForm DifferentialForm::map_coefficients(const std::function<Expr(const Expr&)>& f) const {
  DifferentialForm out(chart_, degree_);
  for (const auto& [k, c] : terms_) out.add(k, f(c));
  return out;
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_chart(a.chart_, b.chart_);
  if (a.degree_ != b.degree_) throw InvalidArgument("adding forms of different degree");
  DifferentialForm out = a;
  for (const auto& [k, c] : b.terms_) out.add(k, c);
  return out;
}

DifferentialForm operator-(const DifferentialForm& a) {
  return a.map_coefficients([](const Expr& c) { return -c; });
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) { return a + (-b); }

DifferentialForm operator*(const Expr& f, const DifferentialForm& a) {
  return a.map_coefficients([&](const Expr& c) { return f * c; });
}

std::ostream& operator<<(std::ostream& os, const DifferentialForm& a) {
  if (a.terms().empty()) return os << "0";
  bool first = true;
  for (const auto& [k, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i == 0 ? " d" : "^d") << a.chart().coordinate(k[i]);
  }
  return os;
}

// ---------------------------------------------------------------------------
// Vector fields and maps

VectorField::VectorField(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != chart_.dim()) {
    throw LengthMismatch("vector field needs one component per coordinate");
  }
}

VectorField VectorField::zero(const Chart& chart) {
  return VectorField(chart, std::vector<Expr>(static_cast<std::size_t>(chart.dim()), Expr(0)));
}

VectorField VectorField::coordinate(const Chart& chart, const std::string& name) {
  std::vector<Expr> c(static_cast<std::size_t>(chart.dim()), Expr(0));
  c[static_cast<std::size_t>(chart.index_of(name))] = 1;
  return VectorField(chart, std::move(c));
}

Expr VectorField::apply(const Expr& f) const {
  std::vector<Expr> terms;
  for (int i = 0; i < chart_.dim(); ++i) {
    const Expr& xi = components_[static_cast<std::size_t>(i)];
    if (xi.is_zero()) continue;
    Expr df = differentiate(f, chart_.coordinate(i));
    if (!df.is_zero()) terms.push_back(xi * df);
  }
  return Expr::sum(std::move(terms));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_chart(a.chart_, b.chart_);
  std::vector<Expr> c(a.components_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.components_[i] + b.components_[i];
  return VectorField(a.chart_, std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return a + Expr(-1) * b;
}

VectorField operator*(const Expr& f, const VectorField& a) {
  std::vector<Expr> c(a.components_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f * a.components_[i];
  return VectorField(a.chart_, std::move(c));
}

SmoothMap::SmoothMap(Chart source, Chart target, std::vector<Expr> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != target_.dim()) {
    throw LengthMismatch("smooth map needs one component per target coordinate");
  }
  for (const auto& c : components_) {
    for (const auto& v : free_variables(c)) {
      if (!source_.find(v)) throw InvalidArgument("map component uses '" + v + "', not a source coordinate");
    }
  }
  for (int i = 0; i < target_.dim(); ++i) {
    bindings_.emplace(target_.coordinate(i), components_[static_cast<std::size_t>(i)]);
  }
}

SmoothMap SmoothMap::identity(const Chart& chart) {
  std::vector<Expr> c;
  for (const auto& name : chart.coordinates()) c.push_back(var(name));
  return SmoothMap(chart, chart, std::move(c));
}

std::vector<std::vector<Expr>> SmoothMap::jacobian() const {
  std::vector<std::vector<Expr>> j(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (const auto& u : source_.coordinates()) j[i].push_back(differentiate(components_[i], u));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Exterior calculus

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_chart(a.chart(), b.chart());
  DifferentialForm out(a.chart(), a.degree() + b.degree());
  // Above the chart dimension every product vanishes; the zero form is returned.
  if (out.degree() > a.chart().dim()) return out;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      std::vector<int> idx = ka;
      idx.insert(idx.end(), kb.begin(), kb.end());
      out.add(std::move(idx), ca * cb);
    }
  }
  return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& a) {
  const Chart& chart = a.chart();
  DifferentialForm out(chart, a.degree() + 1);
  if (out.degree() > chart.dim()) return out;
  for (const auto& [k, c] : a.terms()) {
    for (int j = 0; j < chart.dim(); ++j) {
      if (std::find(k.begin(), k.end(), j) != k.end()) continue;
      Expr dc = differentiate(c, chart.coordinate(j));
      if (dc.is_zero()) continue;
      std::vector<int> idx{j};
      idx.insert(idx.end(), k.begin(), k.end());
      out.add(std::move(idx), dc);
    }
  }
  return out;
}

DifferentialForm interior_product(const VectorField& x, const DifferentialForm& a) {
  require_same_chart(x.chart(), a.chart());
  if (a.degree() == 0) throw ZeroDegree("interior product of a 0-form");
  DifferentialForm out(a.chart(), a.degree() - 1);
  for (const auto& [k, c] : a.terms()) {
    for (std::size_t r = 0; r < k.size(); ++r) {
      const Expr& xr = x[k[r]];
      if (xr.is_zero()) continue;
      std::vector<int> rest;
      for (std::size_t s = 0; s < k.size(); ++s) {
        if (s != r) rest.push_back(k[s]);
      }
      out.add(std::move(rest), (r % 2 == 0 ? xr : -xr) * c);
    }
  }
  return out;
}

DifferentialForm interior_product_k(const KVectorField& x, const std::vector<DifferentialForm>& w) {
  if (x.size() != w.size()) throw KMismatch("k-vector field and R^k-valued form differ in k");
  if (w.empty()) throw KMismatch("k must be positive");
  DifferentialForm out(w.front().chart(), w.front().degree() - 1);
  for (std::size_t a = 0; a < w.size(); ++a) out = out + interior_product(x[a], w[a]);
  return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart(), y.chart());
  std::vector<Expr> c;
  for (int i = 0; i < x.chart().dim(); ++i) c.push_back(x.apply(y[i]) - y.apply(x[i]));
  return VectorField(x.chart(), std::move(c));
}

DifferentialForm lie_derivative_form(const VectorField& x, const DifferentialForm& a) {
  require_same_chart(x.chart(), a.chart());
  DifferentialForm out = interior_product(x, exterior_derivative(a));
  if (a.degree() > 0) out = out + exterior_derivative(interior_product(x, a));
  return out;
}

DifferentialForm pullback(const SmoothMap& phi, const DifferentialForm& a) {
  require_same_chart(phi.target(), a.chart());
  const Chart& src = phi.source();
  DifferentialForm out(src, a.degree());
  if (a.degree() > src.dim()) return out;
  std::map<int, DifferentialForm> dphi;  // lazily built dphi_i
  auto differential = [&](int i) -> const DifferentialForm& {
    auto it = dphi.find(i);
    if (it != dphi.end()) return it->second;
    DifferentialForm d = exterior_derivative(DifferentialForm::scalar(src, phi.components()[static_cast<std::size_t>(i)]));
    return dphi.emplace(i, std::move(d)).first->second;
  };
  for (const auto& [k, c] : a.terms()) {
    DifferentialForm term = DifferentialForm::scalar(src, substitute(c, phi.bindings()));
    bool vanished = false;
    for (int i : k) {
      term = wedge(term, differential(i));
      if (term.is_structurally_zero()) {
        vanished = true;
        break;
      }
    }
    if (!vanished) out = out + term;
  }
  return out;
}

std::vector<std::vector<Expr>> prolongation(const SmoothMap& psi) {
  const Chart& src = psi.source();
  const int k = src.dim();
  auto named = [&](int offset) {
    for (int a = 0; a < k; ++a) {
      if (src.coordinate(a) != "t_" + std::to_string(a + offset)) return false;
    }
    return true;
  };
  if (!named(0) && !named(1)) throw SourceNotRk("prolongation needs source coordinates t_0.. or t_1..");
  std::vector<std::vector<Expr>> cols(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    for (const auto& c : psi.components()) cols[static_cast<std::size_t>(a)].push_back(differentiate(c, src.coordinate(a)));
  }
  return cols;
}

std::vector<Expr> along(const SmoothMap& psi, const std::vector<Expr>& exprs) {
  std::vector<Expr> out;
  out.reserve(exprs.size());
  for (const auto& e : exprs) out.push_back(substitute(e, psi.bindings()));
  return out;
}

// ---------------------------------------------------------------------------
// Zero tests

ZeroTest zero_test(const DifferentialForm& a, const SampleSet& samples) {
  ZeroTest acc;
  acc.points_used = static_cast<int>(samples.size());
  for (const auto& [k, c] : a.terms()) absorb(acc, zero_test(c, samples));
  return acc;
}

ZeroTest zero_test(const DifferentialForm& a, const SampleConfig& config) {
  std::vector<Expr> coeffs;
  for (const auto& [k, c] : a.terms()) coeffs.push_back(c);
  if (coeffs.empty()) {
    ZeroTest t;
    return t;
  }
  return zero_test(a, SampleSet(domain_for(a.chart(), coeffs), config));
}

ZeroTest zero_test(const VectorField& x, const SampleSet& samples) {
  ZeroTest acc;
  acc.points_used = static_cast<int>(samples.size());
  for (const auto& c : x.components()) {
    if (!c.is_zero()) absorb(acc, zero_test(c, samples));
  }
  return acc;
}

}  // namespace kontact
