#ifndef KONTACT_LEGENDRIAN_HPP
#define KONTACT_LEGENDRIAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "kontact/forms.hpp"
#include "kontact/kcontact.hpp"

namespace kontact {

/// F^1..F^k in q_j (j in J) and p_a_i (i in I), indices 1-based. Each F^a
/// may use only its own momenta p_a_i.
struct ParametrizingKFunction {
  int n = 1;
  int k = 1;
  std::vector<int> I;
  std::vector<Expr> F;

  std::vector<int> J() const;
  void validate() const;  // InvalidArgument on malformed input
};

/// (q_j for j in J, then p_a_i for i in I, alpha-major).
Chart parameter_chart(const ParametrizingKFunction& f);

struct CompatibilityReport {
  bool compatible = false;
  /// F^a = sum_i p_a_i f^i(q) with shared f^i, recognised structurally.
  bool linear_form = false;
  double max_residual = 0.0;
};

CompatibilityReport check_compatibility(const ParametrizingKFunction& f, const SampleConfig& config = {});

struct LegendrianParametrization {
  SmoothMap map;                       // parameter chart -> canonical chart
  std::vector<VectorField> complement;  // d/dq_i (i in I), d/dp_a_j (j in J)
};

/// s_a = F^a - sum_I p_a_i dF^a/dp_a_i, q_i = -dF^a/dp_a_i, p_a_j = dF^a/dq_j.
/// Throws IncompatibleKFunction when the compatibility condition fails.
LegendrianParametrization build_parametrization(const ParametrizingKFunction& f, const SampleConfig& config = {});

/// Values of the map components at a source point.
Point image_point(const SmoothMap& phi, const Point& u);

struct IsotropyReport {
  bool isotropic = false;
  double max_residual = 0.0;
  /// Legendrian certificate for a supplied complement: nullopt when none given.
  std::optional<bool> certificate;

  std::string summary() const;
};

/// Pulls back every eta^a and d eta^a along phi. With a complement W the
/// certificate also checks rank[TL | W | Reeb] = dim and d eta(W, W) = 0.
IsotropyReport verify_isotropic(const SmoothMap& phi, const KContactStructure& s, const SampleConfig& config = {},
                                const std::vector<VectorField>* complement = nullptr, int n_points = 16);

/// Every direction of w pairs nontrivially with TL under some d eta^a, at
/// every sample point: appending it to TL destroys isotropy.
bool maximality_witness(const SmoothMap& phi, const KContactStructure& s, const std::vector<VectorField>& w,
                        const SampleConfig& config = {}, int n_points = 16);

/// n + (k - 1) n1; InvalidArgument unless 0 <= n1 <= n.
int legendrian_dimension(int n, int k, int n1);

/// Thermodynamic phase space (E, P, V, T, S, mu, N), eta = dE - T dS - mu dN + P dV.
KContactStructure thermo_structure();
/// (S, V, N) -> (f, -f_V, V, f_S, S, f_N, N) in chart order.
SmoothMap thermo_parametrization(const Expr& f);
/// d/dT, d/dP, d/dmu: the isotropic complement of a graph over (S, V, N).
std::vector<VectorField> thermo_complement();

/// Internal energy of the ideal gas with R = U0 = V0 = 1, s0 = 0:
/// V^(-1/cv) exp(S / (N cv)).
Expr ideal_gas_energy(const Rational& cv);

struct GibbsReport {
  bool holds = false;
  double max_residual = 0.0;
};

/// E + PV - TS - mu N on the image of L, after checking that f is
/// homogeneous of degree one (NotHomogeneous otherwise).
GibbsReport check_gibbs_equality(const Expr& f, const SmoothMap& L, const SampleConfig& config = {});

}  // namespace kontact

#endif  // KONTACT_LEGENDRIAN_HPP
