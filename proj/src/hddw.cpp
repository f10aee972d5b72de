#include "kontact/hddw.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "kontact/errors.hpp"
#include "kontact/legendrian.hpp"
#include "kontact/linalg.hpp"

namespace kontact {

HdDWRhs hddw_rhs(const KContactStructure& s, const ReebFrame& reeb, const Expr& h) {
  if (static_cast<int>(reeb.fields.size()) != s.k()) throw KMismatch("Reeb frame size differs from k");
  const Chart& c = s.chart();
  DifferentialForm out = exterior_derivative(DifferentialForm::scalar(c, h));
  for (int a = 0; a < s.k(); ++a) {
    Expr rh = reeb.fields[static_cast<std::size_t>(a)].apply(h);
    if (!rh.is_zero()) out = out - rh * s.eta()[static_cast<std::size_t>(a)];
  }
  return {out, -h};
}

Expr isentropic_hamiltonian(const Expr& f) { return -(var("P") + differentiate(f, "V")) * var("V"); }

HamiltonianSystem::HamiltonianSystem(KContactStructure structure, Expr hamiltonian, const SampleConfig& config)
    : HamiltonianSystem(structure, compute_reeb(structure, config), std::move(hamiltonian)) {}

HamiltonianSystem::HamiltonianSystem(KContactStructure structure, ReebFrame reeb, Expr hamiltonian)
    : structure_(std::move(structure)), reeb_(std::move(reeb)), h_(std::move(hamiltonian)) {
  rhs_ = hddw_rhs(structure_, reeb_, h_);
}

int expected_nullspace_dim(int k, int dim) { return (k - 1) * (dim - k) + k * k - 1; }

HdDWLinearSystem assemble_hddw(const HamiltonianSystem& sys, const Point& p) {
  const int k = sys.k(), dim = sys.dim();
  HdDWLinearSystem out;
  out.a = Eigen::MatrixXd::Zero(dim + 1, k * dim);
  out.b = Eigen::VectorXd::Zero(dim + 1);
  const auto omegas = d_eta_matrices(sys.structure(), p);
  const Eigen::MatrixXd eta = eta_matrix(sys.structure(), p);
  for (int a = 0; a < k; ++a) {
    // (i_X w)_j = sum_i X^i w_ij
    out.a.block(0, a * dim, dim, dim) = omegas[static_cast<std::size_t>(a)].transpose();
    out.a.block(dim, a * dim, 1, dim) = eta.row(a);
  }
  for (const auto& [key, c] : sys.rhs().one_form.terms()) out.b(key[0]) = evaluate_double(c, p);
  out.b(dim) = evaluate_double(sys.rhs().scalar, p);
  return out;
}

double solution_tolerance(const HdDWLinearSystem& sys, const Eigen::MatrixXd& x) {
  return 1e-9 * std::max(1.0, sys.a.norm() * x.norm() + sys.b.norm());
}

namespace {

Eigen::MatrixXd as_rows(const Eigen::VectorXd& v, int k, int dim) {
  Eigen::MatrixXd m(k, dim);
  for (int a = 0; a < k; ++a) m.row(a) = v.segment(a * dim, dim).transpose();
  return m;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.size());
  for (Eigen::Index a = 0; a < m.rows(); ++a) v.segment(a * m.cols(), m.cols()) = m.row(a).transpose();
  return v;
}

}  // namespace

HdDWPointSolution solve_hddw_at_point(const HamiltonianSystem& sys, const Point& p, const SampleConfig& config) {
  const PointRanks ranks = ranks_at(sys.structure(), p, config.rank_threshold);
  if (!(ranks.condition1 && ranks.condition2 && ranks.condition3)) {
    throw StructureDegenerateAtPoint("k-contact conditions fail at the requested point");
  }
  HdDWPointSolution sol;
  sol.point = p;
  sol.system = assemble_hddw(sys, p);
  const LeastNormSolution ls = solve_least_norm(sol.system.a, sol.system.b, config.rank_threshold);
  sol.rank = ls.rank;
  sol.residual_norm = ls.residual;
  sol.particular = as_rows(ls.x, sys.k(), sys.dim());
  if (sol.residual_norm > solution_tolerance(sol.system, ls.x)) {
    throw InconsistentSystem("HdDW system has no solution at this point");
  }
  for (Eigen::Index c = 0; c < ls.null_basis.cols(); ++c) sol.nullspace.push_back(as_rows(ls.null_basis.col(c), sys.k(), sys.dim()));
  return sol;
}

HdDWPointSolution pseudo_gauge_shift(const HdDWPointSolution& sol, const std::vector<double>& coeffs) {
  if (coeffs.size() != sol.nullspace.size()) throw LengthMismatch("one coefficient per nullspace direction");
  HdDWPointSolution out = sol;
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.particular += coeffs[i] * sol.nullspace[i];
  out.residual_norm = (sol.system.a * flatten(out.particular) - sol.system.b).norm();
  return out;
}

// ---------------------------------------------------------------------------
// Sections

SectionResidual section_residual(const HamiltonianSystem& sys, const SmoothMap& psi, const SampleConfig& config) {
  const KContactStructure& s = sys.structure();
  require_same_chart(psi.target(), s.chart());
  if (psi.source().dim() != s.k()) throw KMismatch("section source dimension differs from k");
  const auto cols = prolongation(psi);
  const auto& bind = psi.bindings();
  auto along_psi = [&](const Expr& e) { return substitute(e, bind); };

  DifferentialForm first = -sys.rhs().one_form.map_coefficients(along_psi);
  Expr second = substitute(sys.hamiltonian(), bind);
  for (int a = 0; a < s.k(); ++a) {
    VectorField x(s.chart(), cols[static_cast<std::size_t>(a)]);
    first = first + interior_product(x, s.d_eta()[static_cast<std::size_t>(a)].map_coefficients(along_psi));
    second = second + interior_product(x, s.eta()[static_cast<std::size_t>(a)].map_coefficients(along_psi)).coeff({});
  }
  SectionResidual r;
  for (int j = 0; j < s.dim(); ++j) r.first.push_back(first.coeff({j}));
  r.second = second;
  std::vector<Expr> all = r.first;
  all.push_back(second);
  all.insert(all.end(), psi.components().begin(), psi.components().end());
  SampleSet samples(domain_for(psi.source(), all), config);
  r.first_test.points_used = static_cast<int>(samples.size());
  for (const auto& e : r.first) {
    if (!e.is_zero()) absorb(r.first_test, zero_test(e, samples));
  }
  r.second_test = second.is_zero() ? ZeroTest{ZeroVerdict::Zero, 0.0, static_cast<int>(samples.size()), 0}
                                   : zero_test(second, samples);
  return r;
}

// ---------------------------------------------------------------------------
// Contact flow

Point point_from(const Chart& chart, const Eigen::VectorXd& x) {
  Point p;
  for (int i = 0; i < chart.dim(); ++i) p.emplace(chart.coordinate(i), Number::real(x(i)));
  return p;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t";
  for (const auto& c : coordinates) os << "," << c;
  os << "\n" << std::setprecision(17);
  for (std::size_t r = 0; r < states.size(); ++r) {
    os << times[r];
    for (Eigen::Index i = 0; i < states[r].size(); ++i) os << "," << states[r](i);
    os << "\n";
  }
}

Trajectory integrate_contact_flow(const HamiltonianSystem& sys, const Eigen::VectorXd& x0, double t_end, double dt,
                                  const SampleConfig& config) {
  if (sys.k() != 1) throw KMismatch("contact flows need k = 1");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (x0.size() != sys.dim()) throw LengthMismatch("initial state has the wrong dimension");
  const Chart& chart = sys.structure().chart();
  auto field = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const HdDWPointSolution sol = solve_hddw_at_point(sys, point_from(chart, x), config);
    return sol.particular.row(0).transpose();
  };
  Trajectory tr;
  tr.coordinates = chart.coordinates();
  const long steps = std::lround(t_end / dt);
  Eigen::VectorXd x = x0;
  tr.times.push_back(0.0);
  tr.states.push_back(x);
  for (long n = 0; n < steps; ++n) {
    const Eigen::VectorXd k1 = field(x);
    const Eigen::VectorXd k2 = field(x + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = field(x + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = field(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tr.times.push_back(static_cast<double>(n + 1) * dt);
    tr.states.push_back(x);
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Solutions tangent to isotropic submanifolds

ConstrainedReport check_constrained_solution(const HamiltonianSystem& sys, const SmoothMap& L,
                                             const SampleConfig& config, int n_points) {
  const KContactStructure& s = sys.structure();
  require_same_chart(L.target(), s.chart());
  if (!verify_isotropic(L, s, config).isotropic) throw NotIsotropic("submanifold is not isotropic");
  ConstrainedReport r;
  r.dim_l = L.source().dim();
  if (auto n = polarized_n(s.dim(), s.k())) r.predicted = s.k() * r.dim_l - (*n * (s.k() + 1) - r.dim_l);

  const Expr h_on_l = substitute(sys.hamiltonian(), L.bindings());
  std::vector<Expr> domain_exprs = L.components();
  domain_exprs.push_back(h_on_l);
  if (h_on_l.is_zero()) {
    r.hamiltonian_vanishes = true;
  } else {
    const ZeroTest t = zero_test(h_on_l, SampleSet(domain_for(L.source(), domain_exprs), config));
    r.hamiltonian_vanishes = t.zero();
    r.hamiltonian_residual = t.max_residual;
  }
  if (!r.hamiltonian_vanishes) return r;

  SampleConfig cfg = config;
  cfg.n_points = n_points;
  SampleSet samples(domain_for(L.source(), domain_exprs), cfg);
  const auto jac = L.jacobian();
  const int k = s.k(), dim = s.dim(), dl = r.dim_l;
  r.feasible = true;
  for (const auto& u : samples.points()) {
    const Point x = image_point(L, u);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dl);
    for (int i = 0; i < dim; ++i) {
      for (int c = 0; c < dl; ++c) {
        const Expr& e = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        if (!e.is_zero()) j(i, c) = evaluate_double(e, u);
      }
    }
    const HdDWLinearSystem full = assemble_hddw(sys, x);
    Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(k * dim, k * dl);
    for (int a = 0; a < k; ++a) blocks.block(a * dim, a * dl, dim, dl) = j;
    HdDWLinearSystem restricted{full.a * blocks, full.b};
    const LeastNormSolution ls = solve_least_norm(restricted.a, restricted.b, cfg.rank_threshold);
    r.max_residual = std::max(r.max_residual, ls.residual);
    if (ls.residual > solution_tolerance(restricted, ls.x)) r.feasible = false;
    const int null_dim = k * dl - ls.rank;
    if (r.constrained_nullspace >= 0 && r.constrained_nullspace != null_dim) r.nullspace_consistent = false;
    r.constrained_nullspace = std::max(r.constrained_nullspace, null_dim);
    ++r.points;
  }
  return r;
}

}  // namespace kontact
