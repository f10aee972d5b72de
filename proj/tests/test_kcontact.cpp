#include <doctest.h>

#include <random>

#include "kontact/errors.hpp"
#include "kontact/kcontact.hpp"
#include "kontact/parse.hpp"

using namespace kontact;

namespace {

KContactStructure thermo() {
  Chart c({"E", "P", "V", "T", "S", "mu", "N"});
  auto d = [&](const char* n) { return DifferentialForm::basis(c, n); };
  return KContactStructure({d("E") - var("T") * d("S") - var("mu") * d("N") + var("P") * d("V")});
}

bool is_coordinate_field(const VectorField& x, int index) {
  for (int i = 0; i < x.chart().dim(); ++i) {
    const Expr& c = x[i];
    if (!c.is_constant() || c.value() != (i == index ? 1 : 0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("canonical structure layout") {
  auto s11 = canonical_structure(1, 1);
  CHECK(s11.chart().coordinates() == std::vector<std::string>{"s_1", "q_1", "p_1_1"});
  auto s22 = canonical_structure(2, 2);
  CHECK(s22.dim() == 8);
  const auto& eta1 = s22.eta()[0];
  CHECK(eta1.coeff({s22.chart().index_of("s_1")}) == Expr(1));
  CHECK(eta1.coeff({s22.chart().index_of("q_1")}) == -var("p_1_1"));
  CHECK(eta1.coeff({s22.chart().index_of("q_2")}) == -var("p_1_2"));
  CHECK(eta1.terms().size() == 3);
  CHECK_THROWS_AS(canonical_structure(0, 1), InvalidArgument);
}

TEST_CASE("verify canonical structures") {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      auto r = verify_kcontact(canonical_structure(n, k), {}, 16);
      CHECK_MESSAGE(r.ok(), "n=" << n << " k=" << k);
      CHECK(r.degenerate_points.empty());
    }
  }
}

TEST_CASE("degenerate input fails condition 1 with a report") {
  Chart c({"x", "y", "z"});
  KContactStructure bad({DifferentialForm::basis(c, "x"), DifferentialForm::basis(c, "x")});
  auto r = verify_kcontact(bad, {}, 8);
  CHECK_FALSE(r.condition1);
  CHECK(r.points.front().eta_rank == 1);
  CHECK(r.degenerate_points.size() == r.points.size());
}

TEST_CASE("Reeb frames of canonical structures are coordinate fields") {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      auto s = canonical_structure(n, k);
      auto f = compute_reeb(s);
      REQUIRE(static_cast<int>(f.fields.size()) == k);
      for (int a = 0; a < k; ++a) CHECK(is_coordinate_field(f.fields[static_cast<std::size_t>(a)], a));
      CHECK(check_reeb_commutation(f));
      CHECK(check_reeb_frame(s, f).zero());
    }
  }
}

TEST_CASE("thermodynamic Reeb field is d/dE") {
  auto s = thermo();
  auto f = compute_reeb(s);
  CHECK(is_coordinate_field(f.fields[0], 0));
}

TEST_CASE("Reeb field of a non-straightened contact form") {
  // eta = e^x dz - y dx; solving the two defining equations by hand gives
  // R = -d/dy + e^{-x} d/dz.
  Chart c({"x", "y", "z"});
  KContactStructure s({exp(var("x")) * DifferentialForm::basis(c, "z") - var("y") * DifferentialForm::basis(c, "x")});
  auto f = compute_reeb(s);
  CHECK(check_reeb_frame(s, f).zero());
  CHECK(f.fields[0][0].is_zero());
  SampleSet samples(c.domain(), {});
  for (const auto& p : samples.points()) {
    const double x = p.at("x").to_double();
    CHECK(evaluate_double(f.fields[0][1], p) == doctest::Approx(-1.0));
    CHECK(evaluate_double(f.fields[0][2], p) == doctest::Approx(std::exp(-x)));
  }
}

TEST_CASE("singular Reeb system") {
  Chart c({"x", "y", "z"});
  KContactStructure s({DifferentialForm::basis(c, "x")});  // d eta = 0: kernel too large
  CHECK_THROWS_AS(compute_reeb(s), SingularSystem);
}

TEST_CASE("commutation detects a non-commuting frame") {
  Chart c({"x", "y"});
  ReebFrame f{{VectorField::coordinate(c, "x"), VectorField(c, {0, var("x")})}};
  CHECK_FALSE(check_reeb_commutation(f));
}

TEST_CASE("property: perturbing a Reeb component breaks the defining equations") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 2; ++n) {
    for (int k = 1; k <= 3; ++k) {
      auto s = canonical_structure(n, k);
      auto f = compute_reeb(s);
      std::uniform_int_distribution<int> field(0, k - 1), comp(0, s.dim() - 1);
      for (int trial = 0; trial < 5; ++trial) {
        auto g = f;
        auto& x = g.fields[static_cast<std::size_t>(field(rng))];
        std::vector<Expr> c = x.components();
        const int i = comp(rng);
        c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] + Rational(1, 3) + var(s.chart().coordinate(comp(rng)));
        x = VectorField(s.chart(), c);
        CHECK_FALSE(check_reeb_frame(s, g).zero());
      }
    }
  }
}

TEST_CASE("property: Lie derivative of eta along the Reeb frame vanishes") {
  auto s = thermo();
  auto f = compute_reeb(s);
  for (const auto& eta : s.eta()) CHECK(zero_test(lie_derivative_form(f.fields[0], eta), SampleConfig{}).zero());
  auto c = canonical_structure(2, 3);
  auto fc = compute_reeb(c);
  for (const auto& r : fc.fields) {
    for (const auto& eta : c.eta()) CHECK(lie_derivative_form(r, eta).is_structurally_zero());
  }
}

TEST_CASE("property: eta ^ (d eta)^n is a volume form when k = 1") {
  for (int n = 1; n <= 3; ++n) {
    auto s = canonical_structure(n, 1);
    DifferentialForm vol = s.eta()[0];
    for (int i = 0; i < n; ++i) vol = wedge(vol, s.d_eta()[0]);
    REQUIRE(vol.degree() == s.dim());
    REQUIRE(vol.terms().size() == 1);
    const Expr top = vol.terms().begin()->second;
    SampleSet samples(s.chart().domain(), {});
    for (const auto& p : samples.points()) CHECK(std::abs(evaluate_double(top, p)) > 0.5);
  }
}

TEST_CASE("polarization of the canonical structure") {
  for (int n = 1; n <= 2; ++n) {
    for (int k = 1; k <= 3; ++k) {
      auto s = canonical_structure(n, k);
      std::vector<VectorField> v;
      for (int a = 1; a <= k; ++a) {
        for (int i = 1; i <= n; ++i) v.push_back(VectorField::coordinate(s.chart(), canonical_p(a, i)));
      }
      auto r = check_polarization(s, v, {}, 8);
      CHECK(r.ok());
      CHECK(r.expected_rank == n * k);

      auto with_reeb = v;
      with_reeb.back() = VectorField::coordinate(s.chart(), canonical_s(1));
      auto bad = check_polarization(s, with_reeb, {}, 8);
      CHECK_FALSE(bad.annihilates);
      CHECK_FALSE(bad.ok());
    }
  }
}

TEST_CASE("polarization rank and involutivity failures") {
  auto s = canonical_structure(2, 1);
  const Chart& c = s.chart();
  // Too few directions.
  auto r = check_polarization(s, {VectorField::coordinate(c, "p_1_1")}, {}, 4);
  CHECK_FALSE(r.full_rank);
  // Isotropy fails: d/dq_1 + p_1_1 d/ds_1 lies in ker eta but pairs with d/dp_1_1.
  VectorField lift(c, {var("p_1_1"), 1, 0, 0, 0});
  auto r2 = check_polarization(s, {lift, VectorField::coordinate(c, "p_1_1")}, {}, 4);
  CHECK(r2.annihilates);
  CHECK_FALSE(r2.isotropic);
}
