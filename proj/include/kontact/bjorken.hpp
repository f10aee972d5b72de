#ifndef KONTACT_BJORKEN_HPP
#define KONTACT_BJORKEN_HPP

#include <string>
#include <vector>

#include "kontact/hydro.hpp"

namespace kontact {

/// Chart (t, x, y, z) with t^2 - z^2 > 0, sampled on t in [1, 3], z in [-1, 1].
Chart minkowski_chart();

/// T0 (tau0 / tau)^(1/3) with T0 = tau0 = 1, in the variable "tau".
Expr default_temperature_profile();

/// u = (t/tau, 0, 0, z/tau) with tau = sqrt(t^2 - z^2); the profile is an
/// expression in "tau".
struct BjorkenFlow {
  Chart chart;
  Expr tau;
  std::vector<Expr> u;
  Expr temperature;  // profile with tau substituted

  explicit BjorkenFlow(const Expr& profile = default_temperature_profile());
  FluidTensors fluid() const { return {u, temperature}; }
};

/// d_mu u^mu on the (t, x, y, z) chart.
Expr expansion_scalar(const std::vector<Expr>& u);
/// D f = u^mu d_mu f.
Expr comoving_derivative(const std::vector<Expr>& u, const Expr& f);
/// d^alpha u^beta.
ExprMatrix velocity_gradient(const std::vector<Expr>& u);
/// sigma^{mu nu} = Delta^{mu nu}_{alpha beta} d^alpha u^beta.
ExprMatrix shear_tensor(const std::vector<Expr>& u);

/// sigma_{mu nu} sigma^{mu nu} - (2/3) theta^2.
Expr sigma_identity_defect(const std::vector<Expr>& u);
bool check_sigma_identity(const std::vector<Expr>& u, const SampleDomain& domain, const SampleConfig& config = {});

/// gamma is a constant; I is an expression in the temperature variable "T".
struct PGTSuperpotential {
  Expr gamma = var("gamma");
  Expr I = pow(var("T"), Rational(3));
};

/// I evaluated on the flow's temperature profile.
Expr temperature_scalar(const PGTSuperpotential& s, const BjorkenFlow& f);

/// Phi^{lambda mu nu} = gamma I (u^mu Delta^{lambda nu} - u^nu Delta^{lambda mu}),
/// stored at (lambda * 4 + mu) * 4 + nu.
std::vector<Expr> superpotential(const PGTSuperpotential& s, const BjorkenFlow& f);

/// 1/2 d_lambda (Phi^{lambda mu nu} - Phi^{mu lambda nu} - Phi^{nu lambda mu}).
ExprMatrix pgt_shift(const std::vector<Expr>& phi);

/// Divergence d_mu A^{mu nu}, one entry per nu.
std::vector<Expr> divergence(const ExprMatrix& a);

/// T^{mu nu} = E u u - (PV + Pi) Delta + shear.
struct DissipativeDecomposition {
  Expr energy;
  Expr pv;
  Expr bulk;
  ExprMatrix shear;

  ExprMatrix tensor(const std::vector<Expr>& u) const;
};

/// E = e(T), PV = p(T) on the profile, no dissipation. e and p are
/// expressions in "T".
DissipativeDecomposition perfect_fluid(const Expr& e, const Expr& p, const BjorkenFlow& f);

/// Splits a tensor into E = u u T, PV + Pi = -Delta T / 3 (all in pv, bulk 0)
/// and the traceless transverse part.
DissipativeDecomposition decompose(const ExprMatrix& t, const std::vector<Expr>& u);

/// E' = E + gamma I theta, P'V = PV - gamma D I, Pi' = Pi - (2 gamma / 3) I theta,
/// shear' = shear - gamma I sigma.
DissipativeDecomposition apply_pgt(const DissipativeDecomposition& d, const PGTSuperpotential& s, const BjorkenFlow& f);

/// shear^{mu nu} sigma_{mu nu} - Pi theta.
Expr entropy_production(const DissipativeDecomposition& d, const BjorkenFlow& f);

struct PGTDemoParams {
  Expr profile = default_temperature_profile();
  PGTSuperpotential pgt;
  Expr energy = 3 * pow(var("T"), Rational(4));
  Expr pressure = pow(var("T"), Rational(4));
};

struct NamedCheck {
  std::string name;
  ZeroTest test;
  bool ok() const { return test.zero(); }
};

struct PGTDemoReport {
  std::vector<NamedCheck> checks;  // theta_identity .. entropy_after
  double max_residual = 0.0;
  bool ok() const;
  const NamedCheck& check(const std::string& name) const;
};

/// theta_identity, sigma_orthogonal, sigma_traceless, sigma_identity,
/// antisymmetry, divergence_free_shift, entropy_before, entropy_after.
PGTDemoReport full_pgt_demo(const PGTDemoParams& params, const SampleConfig& config = {});

}  // namespace kontact

#endif  // KONTACT_BJORKEN_HPP
