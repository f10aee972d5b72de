#include <doctest.h>

#include <random>

#include "kontact/errors.hpp"
#include "kontact/hydro.hpp"
#include "kontact/parse.hpp"

using namespace kontact;

namespace {

bool vanishes(const Expr& e, const std::vector<std::string>& extra = {}) {
  if (e.is_zero()) return true;
  SampleDomain d;
  d.add_variables(free_variables(e));
  d.add_variables(extra);
  return is_probably_zero(e, d);
}

/// Section with every field constant except the given overrides.
SmoothMap section(int k, const std::map<std::string, Expr>& overrides) {
  std::vector<std::string> t;
  for (int mu = 0; mu < k; ++mu) t.push_back(hydro_t(mu));
  const Chart target = hydro_chart(k);
  std::vector<Expr> comps;
  int n = 0;
  for (const auto& name : target.coordinates()) {
    auto it = overrides.find(name);
    comps.push_back(it != overrides.end() ? it->second : Expr(Rational(n % 5 + 2, 3)));
    ++n;
  }
  return SmoothMap(Chart(t), target, comps);
}

Expr random_poly(std::mt19937_64& rng, int k) {
  std::uniform_int_distribution<int> c(-4, 4), v(0, k - 1);
  Expr e = Expr(c(rng));
  for (int term = 0; term < 3; ++term) {
    e = e + Expr(Rational(c(rng), 3)) * var(hydro_t(v(rng))) * var(hydro_t(v(rng)));
  }
  return e + Expr(c(rng)) * var(hydro_t(v(rng)));
}

std::vector<Expr> boosted_velocity() {
  const Expr v = var("v"), w = var("w");
  return {sqrt(1 + v * v + w * w), v, w, Expr(0)};
}

}  // namespace

TEST_CASE("metric") {
  MinkowskiMetric g;
  CHECK(g.dim() == 4);
  CHECK(g(0, 0) == 1);
  CHECK(g(2, 2) == -1);
  CHECK(g(1, 2) == 0);
  const auto m = g.matrix();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      int s = 0;
      for (int c = 0; c < 4; ++c) s += g(a, c) * g(c, b);
      CHECK(s == (a == b ? 1 : 0));
    }
  }
  CHECK(m[3][3] == Expr(-1));
  CHECK(kLeviCivitaUpper0123 == 1);
}

TEST_CASE("chart") {
  CHECK(hydro_chart(2).dim() == 4 + 8 + 2);
  CHECK(hydro_chart(3).dim() == 9 + 12 + 2);
  const Chart c = hydro_chart(4);
  CHECK(c.dim() == 34);
  CHECK(c.coordinate(0) == "S_0");
  CHECK(c.coordinate(8) == "V");
  CHECK(c.coordinate(9) == "xi");
  CHECK(c.coordinate(18) == "T_0_0");
  CHECK(c.coordinate(33) == "T_3_3");
  CHECK_THROWS_AS(hydro_chart(1), InvalidArgument);
}

TEST_CASE("structure") {
  for (int k : {2, 3, 4}) {
    CAPTURE(k);
    const auto s = hydro_structure(k);
    CHECK(verify_kcontact(s, {}, k == 4 ? 20 : 40).ok());
    const auto reeb = compute_reeb(s);
    for (int mu = 0; mu < k; ++mu) {
      CHECK(reeb.fields[static_cast<std::size_t>(mu)].components() ==
            VectorField::coordinate(s.chart(), hydro_S(mu)).components());
    }
  }
  SUBCASE("differential matches the displayed form") {
    const int k = 4;
    const auto s = hydro_structure(k);
    const Chart& c = s.chart();
    auto d = [&](const std::string& n) { return DifferentialForm::basis(c, n); };
    for (int mu = 0; mu < k; ++mu) {
      DifferentialForm w = wedge(d("xi"), d(hydro_N(mu))) - wedge(d(hydro_P(mu)), d("V"));
      for (int l = 0; l < k; ++l) {
        const DifferentialForm dbeta_low = Expr(l == 0 ? 1 : -1) * d(hydro_beta(l));
        w = w - wedge(dbeta_low, d(hydro_T(l, mu)));
      }
      CHECK((s.d_eta()[static_cast<std::size_t>(mu)] - w).is_structurally_zero());
    }
  }
}

TEST_CASE("polarization") {
  for (int k : {2, 4}) {
    CAPTURE(k);
    const auto v = hydro_polarization(k);
    CHECK(static_cast<int>(v.size()) == k * (k + 2));
    const auto r = check_polarization(hydro_structure(k), v, {}, 8);
    CHECK(r.annihilates);
    CHECK(r.isotropic);
    CHECK(r.involutive);
    CHECK(r.full_rank);
    CHECK(r.min_rank == k * (k + 2));
    CHECK(r.ok());
  }
  SUBCASE("fields as printed, with beta^lambda and +xi, leave ker eta") {
    const int k = 4;
    const auto s = hydro_structure(k);
    const Chart& c = s.chart();
    auto d = [&](const std::string& n) { return VectorField::coordinate(c, n); };
    std::vector<VectorField> printed;
    for (int l = 0; l < k; ++l) {
      for (int mu = 0; mu < k; ++mu) printed.push_back(var(hydro_beta(l)) * d(hydro_S(mu)) + d(hydro_T(l, mu)));
    }
    for (int mu = 0; mu < k; ++mu) printed.push_back(var("xi") * d(hydro_S(mu)) + d(hydro_N(mu)));
    for (int mu = 0; mu < k; ++mu) printed.push_back(d(hydro_P(mu)));
    CHECK_FALSE(check_polarization(s, printed, {}, 8).annihilates);
    // time-like beta fields agree, spatial ones and the xi fields do not
    CHECK(interior_product(printed[0], s.eta()[0]).coeff({}).is_zero());
    CHECK_FALSE(interior_product(printed[static_cast<std::size_t>(k + 1)], s.eta()[1]).coeff({}).is_zero());
    CHECK_FALSE(interior_product(printed[static_cast<std::size_t>(k * k)], s.eta()[0]).coeff({}).is_zero());
  }
}

TEST_CASE("equilibrium Legendrian") {
  const int k = 4;
  const auto L = equilibrium_legendrian(k);
  const auto s = hydro_structure(k);
  CHECK(L.map.source().dim() == 6);
  const auto iso = verify_isotropic(L.map, s, {}, &L.complement);
  CHECK(iso.isotropic);
  CHECK(iso.certificate.value());
  CHECK(iso.max_residual < 1e-9);

  SUBCASE("image is a conformal perfect fluid") {
    const auto& b = L.map.bindings();
    Expr bb = 0;
    for (int mu = 0; mu < k; ++mu) bb = bb + Expr(mu == 0 ? 1 : -1) * var(hydro_beta(mu)) * var(hydro_beta(mu));
    const Expr temp = pow(bb, Rational(-1, 2));
    const Expr pv = var("V") * exp(var("xi")) * pow(temp, Rational(4));
    const Expr energy = 3 * pv;
    std::vector<Expr> u;
    for (int mu = 0; mu < k; ++mu) u.push_back(var(hydro_beta(mu)) * temp);
    const auto delta = delta_projector(u);
    const SampleDomain dom = domain_for(L.map.source(), L.map.components());
    for (int l = 0; l < k; ++l) {
      CHECK(is_probably_zero(b.at(hydro_P(l)) - pv / var("V") * var(hydro_beta(l)), dom));
      CHECK(is_probably_zero(b.at(hydro_N(l)) - b.at(hydro_P(l)) * var("V"), dom));
      for (int mu = 0; mu < k; ++mu) {
        const Expr perfect = energy * u[static_cast<std::size_t>(l)] * u[static_cast<std::size_t>(mu)] -
                             pv * delta[static_cast<std::size_t>(l)][static_cast<std::size_t>(mu)];
        CHECK(is_probably_zero(b.at(hydro_T(l, mu)) - perfect, dom));
      }
      const Expr entropy = (energy + pv) * u[static_cast<std::size_t>(l)] / temp - var("xi") * b.at(hydro_N(l));
      CHECK(is_probably_zero(b.at(hydro_S(l)) - entropy, dom));
    }
  }
  SUBCASE("k = 2 variant") {
    const auto L2 = equilibrium_legendrian(2);
    CHECK(verify_isotropic(L2.map, hydro_structure(2), {}, &L2.complement).certificate.value());
  }
}

TEST_CASE("entropy current") {
  const int k = 4;
  SUBCASE("perfect fluid") {
    const auto u = boosted_velocity();
    FluidTensors fluid{u, var("Temp")};
    CHECK(vanishes(normalization_defect(fluid)));
    const auto beta = fluid.beta();
    const auto delta = delta_projector(u);
    std::map<std::string, Expr> state;
    for (int mu = 0; mu < k; ++mu) {
      state[hydro_N(mu)] = Expr(0);
      state[hydro_beta(mu)] = beta[static_cast<std::size_t>(mu)];
      state[hydro_P(mu)] = var("p") * beta[static_cast<std::size_t>(mu)];
      for (int nu = 0; nu < k; ++nu) {
        state[hydro_T(mu, nu)] = var("E") * u[static_cast<std::size_t>(mu)] * u[static_cast<std::size_t>(nu)] -
                                 var("p") * var("V") * delta[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
      }
    }
    const auto s = entropy_current(k, state);
    for (int mu = 0; mu < k; ++mu) {
      CHECK(vanishes(s[static_cast<std::size_t>(mu)] - (var("E") + var("p") * var("V")) * u[static_cast<std::size_t>(mu)] / var("Temp")));
    }
  }
  SUBCASE("all zero") {
    std::map<std::string, Expr> zero;
    const Chart c = hydro_chart(k);
    for (const auto& name : c.coordinates()) zero[name] = Expr(0);
    for (const auto& e : entropy_current(k, zero)) CHECK(e.is_zero());
  }
  SUBCASE("xi only") {
    std::map<std::string, Expr> state;
    for (int mu = 0; mu < k; ++mu) {
      state[hydro_P(mu)] = Expr(0);
      state[hydro_beta(mu)] = Expr(0);
    }
    const auto s = entropy_current(k, state);
    for (int mu = 0; mu < k; ++mu) CHECK(s[static_cast<std::size_t>(mu)] == -var("xi") * var(hydro_N(mu)));
  }
}

TEST_CASE("equilibrium conditions") {
  const int k = 4;
  SUBCASE("constant section") {
    const auto r = equilibrium_conditions_residual(section(k, {}), k);
    REQUIRE(r.families.size() == 7);
    for (const auto& f : r.families) CHECK(f.ok());
    CHECK(r.hddw.ok());
    CHECK(r.agrees());
  }
  SUBCASE("xi linear in time") {
    const auto r = equilibrium_conditions_residual(section(k, {{"xi", var("t_0")}}), k);
    for (const auto& f : r.families) {
      CAPTURE(f.name);
      CHECK(f.ok() == (f.name != "dxi"));
    }
    CHECK(r.family("dxi").residuals[0] == Expr(1));
    CHECK_FALSE(r.hddw.ok());
    CHECK(r.agrees());
    // the dN^0 coefficient of the raw residual carries d_0 xi
    const int n0 = hydro_chart(k).index_of(hydro_N(0));
    CHECK(r.hddw.first[static_cast<std::size_t>(n0)] == Expr(1));
  }
  SUBCASE("divergence-free T with varying beta") {
    const auto r = equilibrium_conditions_residual(
        section(k, {{hydro_T(0, 1), exp(var("t_2"))}, {hydro_T(1, 0), exp(var("t_2"))}, {hydro_beta(2), var("t_3")}}), k);
    CHECK(r.family("divT").ok());
    CHECK_FALSE(r.family("dbeta").ok());
    CHECK(r.family("divS").ok());
    CHECK(r.agrees());
  }
  SUBCASE("non-symmetric T separates the two divergences") {
    const auto r = equilibrium_conditions_residual(section(k, {{hydro_T(0, 1), exp(var("t_1"))}}), k);
    CHECK(r.families_ok());
    CHECK_FALSE(r.hddw.ok());
    CHECK_FALSE(r.agrees());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(equilibrium_conditions_residual(section(2, {}), k), ChartMismatch);
    SmoothMap wrong(Chart({"t_1", "t_2", "t_3", "t_4"}), hydro_chart(k), section(k, {}).components());
    CHECK_THROWS_AS(equilibrium_conditions_residual(wrong, k), SourceNotRk);
  }
}

TEST_CASE("first equation expansion") {
  std::mt19937_64 rng(5);
  for (int k : {2, 4}) {
    for (int trial = 0; trial < 3; ++trial) {
      std::map<std::string, Expr> fields;
      const Chart c = hydro_chart(k);
      for (const auto& name : c.coordinates()) fields[name] = random_poly(rng, k);
      fields["V"] = 3 + var("t_0") * var("t_0");
      const auto psi = section(k, fields);
      HamiltonianSystem sys(hydro_structure(k), Expr(0));
      const auto raw = section_residual(sys, psi);
      const auto shown = expanded_first_equation(psi, k);
      for (int j = 0; j < psi.target().dim(); ++j) {
        CAPTURE(psi.target().coordinate(j));
        CHECK(vanishes(raw.first[static_cast<std::size_t>(j)] - shown.coeff({j})));
      }
    }
  }
}

TEST_CASE("second equation reduces to entropy conservation") {
  const int k = 4;
  // conserved N and T, constant xi, beta, V, P; arbitrary S
  std::map<std::string, Expr> f{{hydro_N(0), var("t_1")}, {hydro_N(1), var("t_0")},
                                {hydro_T(0, 2), var("t_3")}, {hydro_T(2, 0), var("t_3")},
                                {hydro_T(1, 1), var("t_0") * var("t_2")}};
  for (int mu = 0; mu < k; ++mu) f[hydro_S(mu)] = exp(var(hydro_t(mu))) * var(hydro_t((mu + 1) % k));
  const auto psi = section(k, f);
  const auto r = equilibrium_conditions_residual(psi, k);
  CHECK(r.family("divN").ok());
  CHECK(r.family("divT").ok());
  CHECK(vanishes(r.hddw.second - r.family("divS").residuals[0]));

  SUBCASE("divergence of the entropy current by the chain rule") {
    std::map<std::string, Expr> g{{hydro_N(0), var("t_1") * var("t_2")}, {hydro_P(1), var("t_1") * var("t_1")},
                                  {hydro_T(0, 3), exp(var("t_2"))}, {hydro_T(2, 1), var("t_0")}};
    const auto psi2 = section(k, g);
    const auto& b = psi2.bindings();
    const auto s = entropy_current(k, b);
    Expr div = 0, rhs = 0;
    for (int mu = 0; mu < k; ++mu) {
      auto d = [&](const std::string& n) { return differentiate(b.at(n), hydro_t(mu)); };
      div = div + differentiate(s[static_cast<std::size_t>(mu)], hydro_t(mu));
      rhs = rhs + b.at("V") * d(hydro_P(mu)) - b.at("xi") * d(hydro_N(mu));
      for (int l = 0; l < k; ++l) rhs = rhs + Expr(l == 0 ? 1 : -1) * b.at(hydro_beta(l)) * d(hydro_T(l, mu));
    }
    CHECK(vanishes(div - rhs));
  }
}

TEST_CASE("projectors") {
  const MinkowskiMetric g;
  SUBCASE("rest frame") {
    const auto d = delta_projector({Expr(1), Expr(0), Expr(0), Expr(0)});
    CHECK(d[0][0] == Expr(0));
    CHECK(d[1][1] == Expr(-1));
    CHECK(d[3][3] == Expr(-1));
    CHECK(d[0][2] == Expr(0));
  }
  const auto u = boosted_velocity();
  const auto d = delta_projector(u);
  for (int mu = 0; mu < 4; ++mu) {
    Expr ortho = 0;
    for (int nu = 0; nu < 4; ++nu) ortho = ortho + d[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] * g.sign(nu) * u[static_cast<std::size_t>(nu)];
    CHECK(vanishes(ortho));
    for (int nu = 0; nu < 4; ++nu) {
      Expr sq = 0;
      for (int l = 0; l < 4; ++l) {
        sq = sq + d[static_cast<std::size_t>(mu)][static_cast<std::size_t>(l)] * g.sign(l) * d[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)];
      }
      CHECK(vanishes(sq - d[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)]));
    }
  }
  const ShearProjector p(u);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Expr trace = 0;
      for (int mu = 0; mu < 4; ++mu) trace = trace + g.sign(mu) * p(mu, mu, a, b);
      CHECK(vanishes(trace));
      CHECK(vanishes(p(a, b, 1, 2) - p(b, a, 1, 2)));
    }
  }
  CHECK_THROWS_AS(ShearProjector({Expr(1), Expr(0), Expr(0)}), DimensionNot4);
}

TEST_CASE("HdDW solutions on the hydro structure") {
  const int k = 4;
  HamiltonianSystem sys(hydro_structure(k), Expr(0));
  CHECK(sys.dim() == 34);
  const SampleSet pts(sys.structure().domain(), SampleConfig{.seed = 9, .n_points = 3});
  for (const auto& p : pts.points()) {
    const auto sol = solve_hddw_at_point(sys, p);
    CHECK(sol.nullspace_dim() == expected_nullspace_dim(k, 34));
    CHECK(sol.nullspace_dim() == 105);
    CHECK(sol.particular.norm() < 1e-12);
  }
  const auto L = equilibrium_legendrian(k);
  const auto r = check_constrained_solution(sys, L.map, {}, 4);
  CHECK(r.hamiltonian_vanishes);
  CHECK(r.feasible);
  CHECK(r.dim_l == 6);
  CHECK(r.predicted == 0);
  CHECK(r.constrained_nullspace == 0);
  CHECK(r.nullspace_consistent);
}
