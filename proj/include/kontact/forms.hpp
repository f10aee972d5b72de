#ifndef KONTACT_FORMS_HPP
#define KONTACT_FORMS_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kontact/expr.hpp"
#include "kontact/sampling.hpp"

namespace kontact {

/// A single coordinate chart: ordered coordinate names plus the open domain
/// used for sampling (constraints must stay > 0). Cheap to copy.
class Chart {
 public:
  Chart();
  explicit Chart(std::vector<std::string> coordinates, std::vector<Expr> constraints = {},
                 std::map<std::string, std::pair<Rational, Rational>> ranges = {});

  const std::vector<std::string>& coordinates() const;
  const std::string& coordinate(int i) const { return coordinates()[static_cast<std::size_t>(i)]; }
  int dim() const;
  std::optional<int> find(const std::string& name) const;
  int index_of(const std::string& name) const;  // InvalidArgument if absent
  const std::vector<Expr>& constraints() const;
  const std::map<std::string, std::pair<Rational, Rational>>& ranges() const;

  /// Sampling domain over the coordinates, constraints and ranges.
  SampleDomain domain() const;

  friend bool operator==(const Chart& a, const Chart& b);
  friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

void require_same_chart(const Chart& a, const Chart& b);

/// Sorts idx in place and returns the parity of the sorting permutation,
/// or 0 when an index repeats.
int sort_with_parity(std::vector<int>& idx);

/// Sparse p-form: strictly increasing index tuples to coefficients.
class DifferentialForm {
 public:
  using Key = std::vector<int>;

  DifferentialForm() = default;
  DifferentialForm(Chart chart, int degree);

  static DifferentialForm scalar(const Chart& chart, const Expr& f);
  /// d(coordinate)
  static DifferentialForm basis(const Chart& chart, const std::string& coordinate);
  static DifferentialForm one_form(const Chart& chart, const std::vector<Expr>& coefficients);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  const std::map<Key, Expr>& terms() const { return terms_; }

  /// Coefficient for any index order (antisymmetric), zero when absent.
  Expr coeff(Key idx) const;
  /// Adds c * dx_idx, reordering idx with its sign.
  void add(Key idx, const Expr& c);
  bool is_structurally_zero() const { return terms_.empty(); }

  DifferentialForm map_coefficients(const std::function<Expr(const Expr&)>& f) const;

  friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a);
  friend DifferentialForm operator*(const Expr& f, const DifferentialForm& a);

 private:
  Chart chart_;
  int degree_ = 0;
  std::map<Key, Expr> terms_;
};

std::ostream& operator<<(std::ostream& os, const DifferentialForm& a);

class VectorField {
 public:
  VectorField() = default;
  VectorField(Chart chart, std::vector<Expr> components);

  static VectorField zero(const Chart& chart);
  static VectorField coordinate(const Chart& chart, const std::string& name);  // d/d name

  const Chart& chart() const { return chart_; }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }

  /// X(f) = sum_i X^i df/dx^i
  Expr apply(const Expr& f) const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const Expr& f, const VectorField& a);

 private:
  Chart chart_;
  std::vector<Expr> components_;
};

/// X_1..X_k on a shared chart.
using KVectorField = std::vector<VectorField>;
/// eta^1..eta^k on a shared chart.
using RkOneForm = std::vector<DifferentialForm>;

/// Component maps source -> target, in source coordinates.
class SmoothMap {
 public:
  SmoothMap() = default;
  SmoothMap(Chart source, Chart target, std::vector<Expr> components);

  static SmoothMap identity(const Chart& chart);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  const std::vector<Expr>& components() const { return components_; }
  /// target coordinate -> component, for substitution.
  const std::map<std::string, Expr>& bindings() const { return bindings_; }

  /// Jacobian entries d(component_i)/d(source_j), target-major.
  std::vector<std::vector<Expr>> jacobian() const;

 private:
  Chart source_;
  Chart target_;
  std::vector<Expr> components_;
  std::map<std::string, Expr> bindings_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm exterior_derivative(const DifferentialForm& a);
DifferentialForm interior_product(const VectorField& x, const DifferentialForm& a);
/// sum_alpha i_{X_alpha} w^alpha
DifferentialForm interior_product_k(const KVectorField& x, const std::vector<DifferentialForm>& w);
VectorField lie_bracket(const VectorField& x, const VectorField& y);
DifferentialForm lie_derivative_form(const VectorField& x, const DifferentialForm& a);
DifferentialForm pullback(const SmoothMap& phi, const DifferentialForm& a);

/// First prolongation of psi: R^k -> M, the k columns of its Jacobian as
/// component lists in the source variables. The source chart must be
/// t_0..t_{k-1} or t_1..t_k (SourceNotRk otherwise).
std::vector<std::vector<Expr>> prolongation(const SmoothMap& psi);

/// Composes a field on psi.target with psi (components substituted).
std::vector<Expr> along(const SmoothMap& psi, const std::vector<Expr>& exprs);

/// Coefficientwise zero test, all coefficients on one sample set.
ZeroTest zero_test(const DifferentialForm& a, const SampleSet& samples);
ZeroTest zero_test(const DifferentialForm& a, const SampleConfig& config);
ZeroTest zero_test(const VectorField& x, const SampleSet& samples);

/// Sampling domain of a chart, widened by the free variables of exprs.
SampleDomain domain_for(const Chart& chart, const std::vector<Expr>& exprs);

}  // namespace kontact

#endif  // KONTACT_FORMS_HPP
