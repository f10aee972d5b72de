#ifndef KONTACT_HDDW_HPP
#define KONTACT_HDDW_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "kontact/forms.hpp"
#include "kontact/kcontact.hpp"

namespace kontact {

/// Right-hand sides of i_X d eta = dH - (R_a H) eta^a and i_X eta = -H.
struct HdDWRhs {
  DifferentialForm one_form;
  Expr scalar;
};

/// (M, eta, H) with its Reeb frame; the right-hand sides are cached.
class HamiltonianSystem {
 public:
  HamiltonianSystem(KContactStructure structure, Expr hamiltonian, const SampleConfig& config = {});
  HamiltonianSystem(KContactStructure structure, ReebFrame reeb, Expr hamiltonian);

  const KContactStructure& structure() const { return structure_; }
  const ReebFrame& reeb() const { return reeb_; }
  const Expr& hamiltonian() const { return h_; }
  const HdDWRhs& rhs() const { return rhs_; }
  int k() const { return structure_.k(); }
  int dim() const { return structure_.dim(); }

 private:
  KContactStructure structure_;
  ReebFrame reeb_;
  Expr h_;
  HdDWRhs rhs_;
};

/// -(P + f_V) V on the thermodynamic chart; its flow is isentropic.
Expr isentropic_hamiltonian(const Expr& f);

HdDWRhs hddw_rhs(const KContactStructure& s, const ReebFrame& reeb, const Expr& h);

/// (k-1)(dim-k) + k^2 - 1
int expected_nullspace_dim(int k, int dim);

/// Linear system in the unknowns X_a^i (index a*dim + i): dim rows from the
/// first equation, one row from the second.
struct HdDWLinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

HdDWLinearSystem assemble_hddw(const HamiltonianSystem& sys, const Point& p);

struct HdDWPointSolution {
  Point point;
  Eigen::MatrixXd particular;              // k x dim, row a holds X_a
  std::vector<Eigen::MatrixXd> nullspace;  // orthonormal basis, each k x dim
  double residual_norm = 0.0;
  int rank = 0;
  HdDWLinearSystem system;

  int nullspace_dim() const { return static_cast<int>(nullspace.size()); }
};

/// Least-norm particular solution and orthonormal nullspace by SVD.
/// StructureDegenerateAtPoint if the k-contact conditions fail at p,
/// InconsistentSystem if the least-squares residual is not small.
HdDWPointSolution solve_hddw_at_point(const HamiltonianSystem& sys, const Point& p, const SampleConfig& config = {});

/// particular + sum_i c_i nullspace_i, with the residual recomputed.
HdDWPointSolution pseudo_gauge_shift(const HdDWPointSolution& sol, const std::vector<double>& coeffs);

/// Residual tolerance used for point solutions.
double solution_tolerance(const HdDWLinearSystem& sys, const Eigen::MatrixXd& x);

struct SectionResidual {
  std::vector<Expr> first;  // coefficient of dx^j in i_{psi'} d eta - rhs, along psi
  Expr second;              // i_{psi'} eta + H, along psi
  ZeroTest first_test;
  ZeroTest second_test;

  bool ok() const { return first_test.zero() && second_test.zero(); }
  double max_residual() const { return std::max(first_test.max_residual, second_test.max_residual); }
};

/// Substitutes psi and its prolongation into both equations.
SectionResidual section_residual(const HamiltonianSystem& sys, const SmoothMap& psi, const SampleConfig& config = {});

struct Trajectory {
  std::vector<std::string> coordinates;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  /// Header row then one row per step, 17 significant digits.
  void write_csv(std::ostream& os) const;
};

Point point_from(const Chart& chart, const Eigen::VectorXd& x);

/// Classic fourth-order Runge-Kutta on the contact Hamiltonian field (k = 1),
/// which is re-solved from the linear system at every stage.
Trajectory integrate_contact_flow(const HamiltonianSystem& sys, const Eigen::VectorXd& x0, double t_end, double dt,
                                  const SampleConfig& config = {});

struct ConstrainedReport {
  bool hamiltonian_vanishes = false;  // H restricted to L
  double hamiltonian_residual = 0.0;
  bool feasible = false;               // tangent solutions exist at every sample
  int dim_l = 0;
  int constrained_nullspace = -1;      // k dim L - rank, equal at every sample
  bool nullspace_consistent = true;
  int predicted = -1;                  // k dim L - (n(k+1) - dim L)
  double max_residual = 0.0;
  int points = 0;
};

/// Tangent solutions along an isotropic L: unknowns X_a = J c_a with J the
/// Jacobian of L. NotIsotropic if L fails the isotropy check.
ConstrainedReport check_constrained_solution(const HamiltonianSystem& sys, const SmoothMap& L,
                                             const SampleConfig& config = {}, int n_points = 8);

}  // namespace kontact

#endif  // KONTACT_HDDW_HPP
