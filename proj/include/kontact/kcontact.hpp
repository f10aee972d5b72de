#ifndef KONTACT_KCONTACT_HPP
#define KONTACT_KCONTACT_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "kontact/forms.hpp"
#include "kontact/sampling.hpp"

namespace kontact {

/// eta^1..eta^k on one chart together with their exterior derivatives.
class KContactStructure {
 public:
  explicit KContactStructure(RkOneForm eta);

  const Chart& chart() const { return eta_.front().chart(); }
  int k() const { return static_cast<int>(eta_.size()); }
  int dim() const { return chart().dim(); }
  const RkOneForm& eta() const { return eta_; }
  const std::vector<DifferentialForm>& d_eta() const { return d_eta_; }

  /// Every coefficient of eta and d eta, for building sampling domains.
  std::vector<Expr> coefficients() const;
  SampleDomain domain() const;

 private:
  RkOneForm eta_;
  std::vector<DifferentialForm> d_eta_;
};

/// k x dim matrix of eta coefficients at p.
Eigen::MatrixXd eta_matrix(const KContactStructure& s, const Point& p);
/// d eta^alpha as antisymmetric dim x dim matrices, entry (i,j) = d eta(e_i, e_j).
std::vector<Eigen::MatrixXd> d_eta_matrices(const KContactStructure& s, const Point& p);
/// dim x cols matrix whose columns are the fields at p.
Eigen::MatrixXd field_matrix(const std::vector<VectorField>& fields, const Point& p);

/// w(X, Y) for a 2-form.
Expr pairing(const DifferentialForm& w, const VectorField& x, const VectorField& y);

struct PointRanks {
  Point point;
  int eta_rank = 0;         // condition 1 wants k
  int d_eta_kernel = 0;     // dim ker d eta, condition 2 wants k
  int intersection = 0;     // dim(ker eta cap ker d eta), condition 3 wants 0
  bool condition1 = false;
  bool condition2 = false;
  bool condition3 = false;
};

/// Ranks of the three conditions at one point (DomainError if undefined there).
PointRanks ranks_at(const KContactStructure& s, const Point& p, double rank_threshold);

struct StructureReport {
  int k = 0;
  int dim = 0;
  std::vector<PointRanks> points;
  int undefined_points = 0;  // sample points where a coefficient was undefined
  bool condition1 = false;
  bool condition2 = false;
  bool condition3 = false;
  /// Indices into points where at least one condition failed.
  std::vector<int> degenerate_points;

  bool ok() const { return condition1 && condition2 && condition3; }
};

/// Pointwise rank test of the three k-contact conditions at n_points samples.
/// A failing structure yields a report, never an exception.
StructureReport verify_kcontact(const KContactStructure& s, const SampleConfig& config, int n_points);

struct ReebFrame {
  std::vector<VectorField> fields;
};

/// Solves i_{R_a} eta^b = delta, i_{R_a} d eta^b = 0 by symbolic Gauss-Jordan
/// elimination. Pivots are chosen column by column in chart order, taking the
/// first row whose entry fails the zero test.
ReebFrame compute_reeb(const KContactStructure& s, const SampleConfig& config = {});

/// Residuals of the defining equations of a Reeb frame.
ZeroTest check_reeb_frame(const KContactStructure& s, const ReebFrame& f, const SampleConfig& config = {});
bool check_reeb_commutation(const ReebFrame& f, const SampleConfig& config = {});

/// Coordinate names of the canonical chart (1-based indices).
std::string canonical_s(int alpha);
std::string canonical_q(int i);
std::string canonical_p(int alpha, int i);

/// eta^a = ds_a - sum_i p_a_i dq_i on (s_1..s_k, q_1..q_n, p_1_1..p_k_n).
KContactStructure canonical_structure(int n, int k);

/// n with dim = k + n + n k, when it exists.
std::optional<int> polarized_n(int dim, int k);

struct PolarizationReport {
  bool annihilates = false;  // i_V eta^a = 0
  bool full_rank = false;    // rank n k at every sample point
  bool involutive = false;   // brackets stay in the span
  bool isotropic = false;    // d eta^a(V_i, V_j) = 0
  int expected_rank = -1;
  int min_rank = 0;
  double max_residual = 0.0;

  bool ok() const { return annihilates && full_rank && involutive && isotropic; }
};

PolarizationReport check_polarization(const KContactStructure& s, const std::vector<VectorField>& v,
                                      const SampleConfig& config, int n_points);

}  // namespace kontact

#endif  // KONTACT_KCONTACT_HPP
