#include <doctest.h>

#include <cmath>

#include "kontact/bjorken.hpp"
#include "kontact/errors.hpp"
#include "kontact/parse.hpp"

using namespace kontact;

namespace {

const SampleDomain& domain() {
  static const SampleDomain d = [] {
    SampleDomain out = minkowski_chart().domain();
    out.add_variables({"gamma", "v"});
    return out;
  }();
  return d;
}

bool vanishes(const Expr& e) {
  if (e.is_zero()) return true;
  SampleDomain d = domain();
  d.add_variables(free_variables(e));
  const auto t = zero_test(e, d, {});
  return t.zero() && t.max_residual < 1e-10;
}

Point at_tz(double t, double z) {
  return {{"t", Number::real(t)}, {"x", Number::real(0)}, {"y", Number::real(0)}, {"z", Number::real(z)}};
}

/// Central-difference d_t u^0 + d_z u^3 for the closed-form velocity.
double fd_theta(double t, double z) {
  auto u0 = [](double t, double z) { return t / std::sqrt(t * t - z * z); };
  auto u3 = [](double t, double z) { return z / std::sqrt(t * t - z * z); };
  const double h = 1e-5;
  return (u0(t + h, z) - u0(t - h, z)) / (2 * h) + (u3(t, z + h) - u3(t, z - h)) / (2 * h);
}

}  // namespace

TEST_CASE("flow kinematics") {
  const BjorkenFlow f;
  CHECK(vanishes(normalization_defect(f.fluid())));
  const Expr theta = expansion_scalar(f.u);
  CHECK(vanishes(theta - 1 / f.tau));
  CHECK(evaluate_double(theta, at_tz(2, 0)) == doctest::Approx(0.5));
  CHECK(evaluate_double(theta, at_tz(5, 3)) == doctest::Approx(0.25));
  for (auto [t, z] : std::vector<std::pair<double, double>>{{1.5, 0.2}, {2.7, -0.9}, {1.1, 0.0}}) {
    CHECK(evaluate_double(theta, at_tz(t, z)) == doctest::Approx(fd_theta(t, z)).epsilon(1e-7));
  }
  CHECK(vanishes(f.temperature - pow(f.tau, Rational(-1, 3))));
  CHECK_THROWS_AS(BjorkenFlow(var("t")), InvalidArgument);
  CHECK(vanishes(comoving_derivative(f.u, f.tau) - 1));
}

TEST_CASE("shear tensor") {
  const BjorkenFlow f;
  const auto s = shear_tensor(f.u);
  Expr trace = 0;
  for (int nu = 0; nu < 4; ++nu) {
    Expr ortho = 0;
    for (int mu = 0; mu < 4; ++mu) {
      ortho = ortho + (mu == 0 ? 1 : -1) * f.u[static_cast<std::size_t>(mu)] * s[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
      CHECK(vanishes(s[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] - s[static_cast<std::size_t>(nu)][static_cast<std::size_t>(mu)]));
    }
    CHECK(vanishes(ortho));
    trace = trace + (nu == 0 ? 1 : -1) * s[static_cast<std::size_t>(nu)][static_cast<std::size_t>(nu)];
  }
  CHECK(vanishes(trace));
  CHECK(vanishes(contract(s, s) - Expr(Rational(2, 3)) / (f.tau * f.tau)));
  CHECK(check_sigma_identity(f.u, domain()));
  // local rest frame at z = 0: sigma^{11} = sigma^{22} = theta/3, sigma^{33} = -2 theta/3
  CHECK(evaluate_double(s[1][1], at_tz(2, 0)) == doctest::Approx(0.5 / 3));
  CHECK(evaluate_double(s[3][3], at_tz(2, 0)) == doctest::Approx(-1.0 / 3));

  SUBCASE("static flow") {
    const std::vector<Expr> rest{Expr(1), Expr(0), Expr(0), Expr(0)};
    CHECK(check_sigma_identity(rest, domain()));
    CHECK(expansion_scalar(rest).is_zero());
  }
  SUBCASE("transverse shear flow breaks the identity") {
    const Expr y = var("y");
    const std::vector<Expr> sheared{sqrt(1 + y * y), y, Expr(0), Expr(0)};
    CHECK(vanishes(normalization_defect({sheared, Expr(1)})));
    CHECK_FALSE(check_sigma_identity(sheared, domain()));
  }
}

TEST_CASE("superpotential") {
  const BjorkenFlow f;
  const PGTSuperpotential s;
  const auto phi = superpotential(s, f);
  for (int l = 0; l < 4; ++l) {
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) CHECK(vanishes(phi[static_cast<std::size_t>((l * 4 + mu) * 4 + nu)] + phi[static_cast<std::size_t>((l * 4 + nu) * 4 + mu)]));
    }
  }
  const auto shift = pgt_shift(phi);
  for (const auto& e : divergence(shift)) CHECK(vanishes(e));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) CHECK(vanishes(shift[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] - shift[static_cast<std::size_t>(nu)][static_cast<std::size_t>(mu)]));
  }
  CHECK_THROWS_AS(pgt_shift(std::vector<Expr>(8, Expr(0))), DimensionNot4);
}

TEST_CASE("pseudo-gauge transformation") {
  const BjorkenFlow f;
  const Expr temp4 = pow(var("T"), Rational(4));
  const auto before = perfect_fluid(3 * temp4, temp4, f);
  const Expr theta = expansion_scalar(f.u);

  SUBCASE("gamma = 0 is the identity") {
    const auto after = apply_pgt(before, PGTSuperpotential{Expr(0), pow(var("T"), Rational(3))}, f);
    CHECK(vanishes(after.energy - before.energy));
    CHECK(vanishes(after.pv - before.pv));
    CHECK(after.bulk.is_zero());
    for (const auto& row : after.shear) {
      for (const auto& e : row) CHECK(vanishes(e));
    }
  }
  SUBCASE("constant I") {
    const PGTSuperpotential s{var("gamma"), Expr(2)};
    const auto after = apply_pgt(before, s, f);
    CHECK(vanishes(after.energy - before.energy - 2 * var("gamma") * theta));
    CHECK(vanishes(after.pv - before.pv));
    CHECK(vanishes(after.pv + after.bulk - before.pv + Expr(Rational(4, 3)) * var("gamma") * theta));
  }
  SUBCASE("transformed fields are those of T minus the displayed shift") {
    for (const Expr& I : {pow(var("T"), Rational(3)), exp(var("T")), Expr(1)}) {
      const PGTSuperpotential s{var("gamma"), I};
      const auto shift = pgt_shift(superpotential(s, f));
      ExprMatrix minus = before.tensor(f.u), plus = minus;
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          minus[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] -= shift[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
          plus[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] += shift[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
        }
      }
      const auto quoted = apply_pgt(before, s, f);
      const auto direct = decompose(minus, f.u);
      CHECK(vanishes(direct.energy - quoted.energy));
      CHECK(vanishes(direct.pv - (quoted.pv + quoted.bulk)));
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          CHECK(vanishes(direct.shear[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] -
                         quoted.shear[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)]));
        }
      }
      // adding the shift flips the sign of gamma
      const Expr gi = s.gamma * temperature_scalar(s, f);
      CHECK(vanishes(decompose(plus, f.u).energy - before.energy + gi * theta));
    }
  }
}

TEST_CASE("entropy production") {
  const BjorkenFlow f;
  const Expr temp4 = pow(var("T"), Rational(4));
  const auto perfect = perfect_fluid(3 * temp4, temp4, f);
  CHECK(vanishes(entropy_production(perfect, f)));

  const PGTSuperpotential s;
  const auto after = apply_pgt(perfect, s, f);
  const Expr prod = entropy_production(after, f);
  CHECK(vanishes(prod));
  const Expr theta = expansion_scalar(f.u);
  const auto sigma = shear_tensor(f.u);
  const Expr displayed = -s.gamma * temperature_scalar(s, f) * (contract(sigma, sigma) - Expr(Rational(2, 3)) * theta * theta);
  CHECK(vanishes(prod - displayed));

  DissipativeDecomposition viscous = perfect;
  viscous.shear = sigma;
  const Expr p = entropy_production(viscous, f);
  CHECK(vanishes(p - Expr(Rational(2, 3)) / (f.tau * f.tau)));
  CHECK(evaluate_double(p, at_tz(2, 0)) > 0);
}

TEST_CASE("demo pipeline") {
  SUBCASE("defaults") {
    const auto r = full_pgt_demo({});
    CHECK(r.checks.size() == 8);
    CHECK(r.ok());
    CHECK(r.max_residual < 1e-10);
    CHECK(r.check("entropy_after").test.points_used == 64);
  }
  SUBCASE("gamma sweep") {
    for (const Expr& g : {Expr(-2), Expr(Rational(1, 2)), Expr(10)}) {
      PGTDemoParams p;
      p.pgt.gamma = g;
      CHECK(full_pgt_demo(p).ok());
    }
  }
  SUBCASE("other scalars and profiles") {
    PGTDemoParams p;
    p.pgt.I = exp(var("T"));
    CHECK(full_pgt_demo(p).ok());
    p.pgt.I = Expr(5);
    CHECK(full_pgt_demo(p).ok());
    p.profile = exp(-var("tau"));
    CHECK(full_pgt_demo(p).ok());
  }
  CHECK_THROWS_AS(full_pgt_demo({}).check("nope"), InvalidArgument);
}
