#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "kontact/errors.hpp"
#include "kontact/hddw.hpp"
#include "kontact/legendrian.hpp"
#include "kontact/parse.hpp"

using namespace kontact;

namespace {

Point real_point(const Chart& c, const std::vector<double>& xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
  return point_from(c, v);
}

Point random_point(const Chart& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> xs;
  for (int i = 0; i < c.dim(); ++i) xs.push_back(u(rng));
  return real_point(c, xs);
}

Eigen::VectorXd ideal_gas_start(const Expr& f) {
  const SmoothMap L = thermo_parametrization(f);
  Point u{{"S", Number::real(1.0)}, {"V", Number::real(1.0)}, {"N", Number::real(1.0)}};
  Eigen::VectorXd x(7);
  for (int i = 0; i < 7; ++i) x(i) = evaluate_double(L.components()[static_cast<std::size_t>(i)], u);
  return x;
}

double max_v_error(const Trajectory& tr) {
  double err = 0.0;
  for (std::size_t r = 0; r < tr.states.size(); ++r) {
    err = std::max(err, std::abs(tr.states[r](2) - std::exp(tr.times[r])));
  }
  return err;
}

}  // namespace

TEST_CASE("right-hand sides") {
  const auto s = canonical_structure(1, 1);
  SUBCASE("H = 0") {
    HamiltonianSystem sys(s, Expr(0));
    CHECK(sys.rhs().one_form.is_structurally_zero());
    CHECK(sys.rhs().scalar.is_zero());
  }
  SUBCASE("H constant") {
    HamiltonianSystem sys(s, Expr(3));
    CHECK(sys.rhs().one_form.is_structurally_zero());
    CHECK(sys.rhs().scalar == Expr(-3));
  }
  SUBCASE("H = p") {
    HamiltonianSystem sys(s, var("p_1_1"));
    CHECK(sys.rhs().one_form.coeff({s.chart().index_of("p_1_1")}) == Expr(1));
    CHECK(sys.rhs().one_form.terms().size() == 1);
    CHECK(sys.rhs().scalar == -var("p_1_1"));
  }
  SUBCASE("Reeb term") {
    // R = d/ds, so R(s) = 1 and the rhs is ds - (ds - p dq) = p dq
    HamiltonianSystem sys(s, var("s_1"));
    const auto& w = sys.rhs().one_form;
    CHECK(w.coeff({s.chart().index_of("s_1")}).is_zero());
    CHECK(w.coeff({s.chart().index_of("q_1")}) == var("p_1_1"));
  }
}

TEST_CASE("nullspace dimension law") {
  CHECK(expected_nullspace_dim(1, 3) == 0);
  CHECK(expected_nullspace_dim(2, 5) == 6);
  CHECK(expected_nullspace_dim(4, 34) == 105);

  std::mt19937_64 rng(7);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 2}, {1, 3}, {2, 3}}) {
    const auto s = canonical_structure(n, k);
    for (const char* h : {"0", "s_1 + q_1^2"}) {
      HamiltonianSystem sys(s, parse_expr(h));
      for (int trial = 0; trial < 5; ++trial) {
        const auto sol = solve_hddw_at_point(sys, random_point(s.chart(), rng));
        CAPTURE(n);
        CAPTURE(k);
        CHECK(sol.nullspace_dim() == expected_nullspace_dim(k, s.dim()));
        CHECK(sol.residual_norm < 1e-10);
        CHECK(sol.particular.rows() == k);
        CHECK(sol.particular.cols() == s.dim());
      }
    }
  }
}

TEST_CASE("k = 1 with H = p is the coordinate field along q") {
  const auto s = canonical_structure(1, 1);
  HamiltonianSystem sys(s, var("p_1_1"));
  const auto sol = solve_hddw_at_point(sys, real_point(s.chart(), {0.3, -1.2, 1.7}));
  CHECK(sol.nullspace_dim() == 0);
  CHECK(sol.particular(0, 0) == doctest::Approx(0.0));
  CHECK(sol.particular(0, 1) == doctest::Approx(1.0));
  CHECK(sol.particular(0, 2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(pseudo_gauge_shift(sol, {1.0}), LengthMismatch);
  CHECK(pseudo_gauge_shift(sol, {}).particular == sol.particular);
}

TEST_CASE("shifts stay inside the solution set") {
  const auto s = canonical_structure(2, 2);
  HamiltonianSystem sys(s, parse_expr("s_2*q_1 + p_1_2^2"));
  std::mt19937_64 rng(11);
  const auto sol = solve_hddw_at_point(sys, random_point(s.chart(), rng));
  REQUIRE(sol.nullspace_dim() == expected_nullspace_dim(2, 8));
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> c;
    for (int i = 0; i < sol.nullspace_dim(); ++i) c.push_back(3.0 * g(rng));
    const auto shifted = pseudo_gauge_shift(sol, c);
    CHECK(shifted.residual_norm < 1e-9);
    CHECK((shifted.particular - sol.particular).norm() > 0.0);
  }
  const auto same = pseudo_gauge_shift(sol, std::vector<double>(static_cast<std::size_t>(sol.nullspace_dim()), 0.0));
  CHECK(same.particular == sol.particular);
  // orthonormal basis
  for (int i = 0; i < sol.nullspace_dim(); ++i) {
    for (int j = 0; j < sol.nullspace_dim(); ++j) {
      const double dot = (sol.nullspace[static_cast<std::size_t>(i)].array() * sol.nullspace[static_cast<std::size_t>(j)].array()).sum();
      CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate and inconsistent input") {
  Chart c({"x", "y", "z"});
  // z dx is nowhere contact: d/dy lies in both kernels
  KContactStructure s({DifferentialForm::one_form(c, {var("z"), Expr(0), Expr(0)})});
  HamiltonianSystem sys(s, ReebFrame{{VectorField::zero(c)}}, Expr(0));
  CHECK_THROWS_AS(solve_hddw_at_point(sys, real_point(c, {1.0, 1.0, 1.0})), StructureDegenerateAtPoint);
}

TEST_CASE("ideal gas contact field") {
  const Expr f = ideal_gas_energy(Rational(3, 2));
  HamiltonianSystem sys(thermo_structure(), isentropic_hamiltonian(f));
  CHECK(sys.reeb().fields[0].components() == VectorField::coordinate(sys.structure().chart(), "E").components());
  std::mt19937_64 rng(3);
  const Chart& c = sys.structure().chart();
  for (int trial = 0; trial < 10; ++trial) {
    const Point p = random_point(c, rng);
    const auto sol = solve_hddw_at_point(sys, p);
    CHECK(sol.nullspace_dim() == 0);
    const double V = evaluate_double(var("V"), p);
    const double P = evaluate_double(var("P"), p);
    const double fv = evaluate_double(differentiate(f, "V"), p);
    const double fvv = evaluate_double(differentiate(differentiate(f, "V"), "V"), p);
    const double fvs = evaluate_double(differentiate(differentiate(f, "V"), "S"), p);
    const double fvn = evaluate_double(differentiate(differentiate(f, "V"), "N"), p);
    auto X = [&](const char* name) { return sol.particular(0, c.index_of(name)); };
    CHECK(X("S") == doctest::Approx(0.0));
    CHECK(X("N") == doctest::Approx(0.0));
    CHECK(X("V") == doctest::Approx(V));
    CHECK(X("E") == doctest::Approx(fv * V));
    CHECK(X("T") == doctest::Approx(V * fvs));
    CHECK(X("mu") == doctest::Approx(V * fvn));
    CHECK(X("P") == doctest::Approx(-P - fv - V * fvv));
  }
}

TEST_CASE("isentropic flow") {
  const Expr f = ideal_gas_energy(Rational(3, 2));
  HamiltonianSystem sys(thermo_structure(), isentropic_hamiltonian(f));
  const auto x0 = ideal_gas_start(f);
  const auto tr = integrate_contact_flow(sys, x0, 1.0, 1e-2);
  REQUIRE(tr.states.size() == 101);
  for (const auto& x : tr.states) {
    CHECK(x(4) == doctest::Approx(x0(4)).epsilon(1e-9));
    CHECK(x(6) == doctest::Approx(x0(6)).epsilon(1e-9));
  }
  CHECK(max_v_error(tr) < 1e-8);
  CHECK(tr.times.back() == doctest::Approx(1.0));

  SUBCASE("fourth order") {
    const double coarse = max_v_error(integrate_contact_flow(sys, x0, 1.0, 0.1));
    const double fine = max_v_error(integrate_contact_flow(sys, x0, 1.0, 0.05));
    const double ratio = coarse / fine;
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
  }
  SUBCASE("csv") {
    std::ostringstream os;
    integrate_contact_flow(sys, x0, 0.02, 0.01).write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,E,P,V,T,S,mu,N");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(integrate_contact_flow(sys, x0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(integrate_contact_flow(sys, Eigen::VectorXd::Zero(3), 1.0, 0.1), LengthMismatch);
    HamiltonianSystem two(canonical_structure(1, 2), Expr(0));
    CHECK_THROWS_AS(integrate_contact_flow(two, Eigen::VectorXd::Ones(5), 1.0, 0.1), KMismatch);
  }
}

TEST_CASE("H = 0 leaves every point fixed") {
  HamiltonianSystem sys(canonical_structure(2, 1), Expr(0));
  Eigen::VectorXd x0(5);
  x0 << 0.1, 0.7, -0.4, 1.3, 2.0;
  const auto tr = integrate_contact_flow(sys, x0, 0.5, 0.1);
  for (const auto& x : tr.states) CHECK((x - x0).norm() < 1e-14);
}

TEST_CASE("section residuals") {
  const Expr f = ideal_gas_energy(Rational(3, 2));
  HamiltonianSystem sys(thermo_structure(), isentropic_hamiltonian(f));
  const SmoothMap L = thermo_parametrization(f);
  Chart t({"t_1"});
  std::map<std::string, Expr> curve{{"S", Expr(1)}, {"V", exp(var("t_1"))}, {"N", Expr(1)}};
  std::vector<Expr> comps;
  for (const auto& e : L.components()) comps.push_back(substitute(e, curve));
  SmoothMap psi(t, sys.structure().chart(), comps);
  const auto r = section_residual(sys, psi);
  CHECK(r.ok());
  CHECK(r.max_residual() < 1e-9);

  // wrong speed along V
  curve["V"] = exp(2 * var("t_1"));
  comps.clear();
  for (const auto& e : L.components()) comps.push_back(substitute(e, curve));
  CHECK_FALSE(section_residual(sys, SmoothMap(t, sys.structure().chart(), comps)).ok());

  SmoothMap foreign(t, canonical_structure(1, 1).chart(), {Expr(0), var("t_1"), Expr(0)});
  CHECK_THROWS_AS(section_residual(sys, foreign), ChartMismatch);
}

TEST_CASE("solutions tangent to an isotropic submanifold") {
  const auto s = canonical_structure(2, 2);
  Chart q({"q_1", "q_2"});
  std::vector<Expr> zero_section;
  for (const auto& name : s.chart().coordinates()) {
    zero_section.push_back(q.find(name) ? var(name) : Expr(0));
  }
  SmoothMap L(q, s.chart(), zero_section);

  SUBCASE("H = s_1 vanishes on the zero section") {
    HamiltonianSystem sys(s, var("s_1"));
    const auto r = check_constrained_solution(sys, L);
    CHECK(r.hamiltonian_vanishes);
    CHECK(r.feasible);
    CHECK(r.nullspace_consistent);
    CHECK(r.dim_l == 2);
    CHECK(r.predicted == 2 * 2 - (2 * 3 - 2));
    CHECK(r.constrained_nullspace == r.predicted);
  }
  SUBCASE("H = 1 does not") {
    HamiltonianSystem sys(s, Expr(1));
    const auto r = check_constrained_solution(sys, L);
    CHECK_FALSE(r.hamiltonian_vanishes);
    CHECK_FALSE(r.feasible);
    CHECK(r.points == 0);
  }
  SUBCASE("non-isotropic") {
    std::vector<Expr> comps = zero_section;
    comps[static_cast<std::size_t>(s.chart().index_of("p_1_1"))] = var("q_2");
    HamiltonianSystem sys(s, Expr(0));
    CHECK_THROWS_AS(check_constrained_solution(sys, SmoothMap(q, s.chart(), comps)), NotIsotropic);
  }
}
