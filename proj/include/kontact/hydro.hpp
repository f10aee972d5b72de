#ifndef KONTACT_HYDRO_HPP
#define KONTACT_HYDRO_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "kontact/forms.hpp"
#include "kontact/hddw.hpp"
#include "kontact/kcontact.hpp"
#include "kontact/legendrian.hpp"

namespace kontact {

using ExprMatrix = std::vector<std::vector<Expr>>;

/// diag(+1, -1, ..., -1) in k dimensions.
class MinkowskiMetric {
 public:
  explicit MinkowskiMetric(int k = 4);
  int dim() const { return k_; }
  /// g_{mu nu}, equal to g^{mu nu}.
  int operator()(int mu, int nu) const { return mu != nu ? 0 : (mu == 0 ? 1 : -1); }
  int sign(int mu) const { return mu == 0 ? 1 : -1; }
  ExprMatrix matrix() const;

 private:
  int k_;
};

/// epsilon^{0123} = -epsilon_{0123} = +1.
inline constexpr int kLeviCivitaUpper0123 = 1;

// Hydro chart names.
std::string hydro_S(int mu);
std::string hydro_P(int mu);
std::string hydro_N(int mu);
std::string hydro_beta(int mu);
std::string hydro_T(int lambda, int mu);
std::string hydro_t(int mu);  // section parameter t_mu

/// S^0.., P^0.., V, xi, N^0.., beta^0.., T^{00}..T^{k-1,k-1}: k^2 + 4k + 2
/// coordinates, sampled with V > 0.
Chart hydro_chart(int k);

/// eta^mu = dS^mu + xi dN^mu - beta_lambda dT^{lambda mu} - P^mu dV, k >= 2.
KContactStructure hydro_structure(int k);

/// beta_lambda d/dS^mu + d/dT^{lambda mu}, -xi d/dS^mu + d/dN^mu, d/dP^mu:
/// k(k+2) fields spanning an involutive subbundle of ker eta.
std::vector<VectorField> hydro_polarization(int k);

/// Graph over (beta^mu, xi, V) with P^mu = Phi^mu, N^mu = V d_xi Phi^mu,
/// T^{lambda mu} = -V g_{lambda lambda} dPhi^mu/dbeta^lambda and the
/// entropy current closing the first law, where
/// Phi^mu = e^xi (beta.beta)^(-k/2) beta^mu.
LegendrianParametrization equilibrium_legendrian(int k);

/// S^mu = P^mu V - xi N^mu + beta_lambda T^{lambda mu} in chart variables.
std::vector<Expr> entropy_current(int k);
/// Same, with chart variables replaced by the given bindings.
std::vector<Expr> entropy_current(int k, const std::map<std::string, Expr>& state);

/// The displayed expansion of i_{psi'} d eta along psi:
/// (d_mu xi) dN^mu - (d_mu N^mu) dxi - (d_mu P^mu) dV + (d_mu V) dP^mu
///   - (d_mu beta_lambda) dT^{lambda mu} + (d_mu T^{lambda mu}) dbeta_lambda.
DifferentialForm expanded_first_equation(const SmoothMap& psi, int k);

struct ConditionFamily {
  std::string name;
  std::vector<Expr> residuals;
  ZeroTest test;
  bool ok() const { return test.zero(); }
};

struct EquilibriumReport {
  std::vector<ConditionFamily> families;  // seven, in the order listed below
  SectionResidual hddw;                   // raw residual with H = 0
  bool families_ok() const;
  /// Families and the raw HdDW residual agree on pass/fail.
  bool agrees() const { return families_ok() == hddw.ok(); }
  const ConditionFamily& family(const std::string& name) const;
};

/// d_mu xi, d_mu N^mu, d_mu P^mu, d_mu V, d_mu beta_lambda, d_mu T^{mu nu},
/// d_mu S^mu along psi, named "dxi", "divN", "divP", "dV", "dbeta", "divT",
/// "divS". psi maps t_0..t_{k-1} into hydro_chart(k).
EquilibriumReport equilibrium_conditions_residual(const SmoothMap& psi, int k, const SampleConfig& config = {});

/// Four-velocity and temperature; beta^mu = u^mu / T.
struct FluidTensors {
  std::vector<Expr> u;
  Expr temperature;
  std::vector<Expr> beta() const;
  int dim() const { return static_cast<int>(u.size()); }
};

/// u_mu u^mu - 1.
Expr normalization_defect(const FluidTensors& f);

/// Delta^{mu nu} = g^{mu nu} - u^mu u^nu.
ExprMatrix delta_projector(const std::vector<Expr>& u);

/// Delta^{mu nu}_{alpha beta}; DimensionNot4 unless u has four components.
class ShearProjector {
 public:
  explicit ShearProjector(const std::vector<Expr>& u);
  const Expr& operator()(int mu, int nu, int alpha, int beta) const {
    return data_[static_cast<std::size_t>(((mu * 4 + nu) * 4 + alpha) * 4 + beta)];
  }

 private:
  std::vector<Expr> data_;
};

/// Delta^{mu nu}_{alpha beta} A^{alpha beta} with A given upper-indexed.
ExprMatrix project_traceless(const ShearProjector& p, const ExprMatrix& a);

/// Lowers both indices with the Minkowski metric.
ExprMatrix lower_both(const ExprMatrix& a);
/// A^{mu nu} B_{mu nu} with both given upper-indexed.
Expr contract(const ExprMatrix& a, const ExprMatrix& b);

}  // namespace kontact

#endif  // KONTACT_HYDRO_HPP
