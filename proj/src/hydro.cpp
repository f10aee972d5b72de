#include "kontact/hydro.hpp"

#include <algorithm>

#include "kontact/errors.hpp"

namespace kontact {

MinkowskiMetric::MinkowskiMetric(int k) : k_(k) {
  if (k < 1) throw InvalidArgument("metric dimension must be positive");
}

ExprMatrix MinkowskiMetric::matrix() const {
  ExprMatrix g(static_cast<std::size_t>(k_), std::vector<Expr>(static_cast<std::size_t>(k_), Expr(0)));
  for (int mu = 0; mu < k_; ++mu) g[static_cast<std::size_t>(mu)][static_cast<std::size_t>(mu)] = Expr(sign(mu));
  return g;
}

std::string hydro_S(int mu) { return "S_" + std::to_string(mu); }
std::string hydro_P(int mu) { return "P_" + std::to_string(mu); }
std::string hydro_N(int mu) { return "N_" + std::to_string(mu); }
std::string hydro_beta(int mu) { return "beta_" + std::to_string(mu); }
std::string hydro_T(int lambda, int mu) { return "T_" + std::to_string(lambda) + "_" + std::to_string(mu); }
std::string hydro_t(int mu) { return "t_" + std::to_string(mu); }

namespace {

void require_k(int k) {
  if (k < 2) throw InvalidArgument("hydro structures need k >= 2");
}

std::size_t at(int i) { return static_cast<std::size_t>(i); }

}  // namespace

Chart hydro_chart(int k) {
  require_k(k);
  std::vector<std::string> c;
  for (int mu = 0; mu < k; ++mu) c.push_back(hydro_S(mu));
  for (int mu = 0; mu < k; ++mu) c.push_back(hydro_P(mu));
  c.push_back("V");
  c.push_back("xi");
  for (int mu = 0; mu < k; ++mu) c.push_back(hydro_N(mu));
  for (int mu = 0; mu < k; ++mu) c.push_back(hydro_beta(mu));
  for (int l = 0; l < k; ++l) {
    for (int mu = 0; mu < k; ++mu) c.push_back(hydro_T(l, mu));
  }
  return Chart(std::move(c), {var("V")});
}

KContactStructure hydro_structure(int k) {
  const Chart c = hydro_chart(k);
  const MinkowskiMetric g(k);
  RkOneForm eta;
  for (int mu = 0; mu < k; ++mu) {
    DifferentialForm e = DifferentialForm::basis(c, hydro_S(mu));
    e.add({c.index_of(hydro_N(mu))}, var("xi"));
    for (int l = 0; l < k; ++l) e.add({c.index_of(hydro_T(l, mu))}, -(g.sign(l) * var(hydro_beta(l))));
    e.add({c.index_of("V")}, -var(hydro_P(mu)));
    eta.push_back(std::move(e));
  }
  return KContactStructure(std::move(eta));
}

std::vector<VectorField> hydro_polarization(int k) {
  const Chart c = hydro_chart(k);
  const MinkowskiMetric g(k);
  auto d = [&](const std::string& name) { return VectorField::coordinate(c, name); };
  std::vector<VectorField> out;
  for (int l = 0; l < k; ++l) {
    for (int mu = 0; mu < k; ++mu) out.push_back(g.sign(l) * var(hydro_beta(l)) * d(hydro_S(mu)) + d(hydro_T(l, mu)));
  }
  for (int mu = 0; mu < k; ++mu) out.push_back(-var("xi") * d(hydro_S(mu)) + d(hydro_N(mu)));
  for (int mu = 0; mu < k; ++mu) out.push_back(d(hydro_P(mu)));
  return out;
}

std::vector<Expr> entropy_current(int k) {
  require_k(k);
  const MinkowskiMetric g(k);
  std::vector<Expr> s;
  for (int mu = 0; mu < k; ++mu) {
    Expr e = var(hydro_P(mu)) * var("V") - var("xi") * var(hydro_N(mu));
    for (int l = 0; l < k; ++l) e = e + g.sign(l) * var(hydro_beta(l)) * var(hydro_T(l, mu));
    s.push_back(e);
  }
  return s;
}

std::vector<Expr> entropy_current(int k, const std::map<std::string, Expr>& state) {
  std::vector<Expr> s = entropy_current(k);
  for (auto& e : s) e = substitute(e, state);
  return s;
}

LegendrianParametrization equilibrium_legendrian(int k) {
  require_k(k);
  const MinkowskiMetric g(k);
  std::vector<std::string> params;
  std::map<std::string, std::pair<Rational, Rational>> ranges;
  Expr bb = 0;
  for (int mu = 0; mu < k; ++mu) {
    params.push_back(hydro_beta(mu));
    bb = bb + g.sign(mu) * var(hydro_beta(mu)) * var(hydro_beta(mu));
    if (mu > 0) ranges[hydro_beta(mu)] = {Rational(-1, 4), Rational(1, 4)};
  }
  params.push_back("xi");
  params.push_back("V");
  Chart source(params, {bb, var("V")}, ranges);

  const Expr scale = exp(var("xi")) * pow(bb, Rational(-k, 2));
  std::map<std::string, Expr> image;
  for (int mu = 0; mu < k; ++mu) {
    const Expr phi = scale * var(hydro_beta(mu));
    image[hydro_P(mu)] = phi;
    image[hydro_N(mu)] = var("V") * differentiate(phi, "xi");
    for (int l = 0; l < k; ++l) image[hydro_T(l, mu)] = -(g.sign(l) * var("V") * differentiate(phi, hydro_beta(l)));
  }
  image["V"] = var("V");
  image["xi"] = var("xi");
  for (int mu = 0; mu < k; ++mu) image[hydro_beta(mu)] = var(hydro_beta(mu));
  const auto s = entropy_current(k, image);
  for (int mu = 0; mu < k; ++mu) image[hydro_S(mu)] = s[at(mu)];

  const Chart target = hydro_chart(k);
  std::vector<Expr> comps;
  for (const auto& name : target.coordinates()) comps.push_back(image.at(name));
  return {SmoothMap(source, target, std::move(comps)), hydro_polarization(k)};
}

// ---------------------------------------------------------------------------
// Sections

namespace {

struct SectionFields {
  const SmoothMap& psi;
  int k;
  const std::map<std::string, Expr>& b;
  const Expr& field(const std::string& name) const { return b.at(name); }
  Expr d(int mu, const std::string& name) const { return differentiate(field(name), hydro_t(mu)); }
};

void check_section(const SmoothMap& psi, int k) {
  require_same_chart(psi.target(), hydro_chart(k));
  if (psi.source().dim() != k) throw KMismatch("hydro sections are parametrized by k variables");
  for (int mu = 0; mu < k; ++mu) {
    if (psi.source().coordinate(mu) != hydro_t(mu)) throw SourceNotRk("hydro sections use t_0..t_{k-1}");
  }
}

}  // namespace

DifferentialForm expanded_first_equation(const SmoothMap& psi, int k) {
  check_section(psi, k);
  const MinkowskiMetric g(k);
  const Chart& c = psi.target();
  SectionFields f{psi, k, psi.bindings()};
  DifferentialForm w(c, 1);
  auto idx = [&](const std::string& name) { return std::vector<int>{c.index_of(name)}; };
  for (int mu = 0; mu < k; ++mu) {
    w.add(idx(hydro_N(mu)), f.d(mu, "xi"));
    w.add(idx("xi"), -f.d(mu, hydro_N(mu)));
    w.add(idx("V"), -f.d(mu, hydro_P(mu)));
    w.add(idx(hydro_P(mu)), f.d(mu, "V"));
    for (int l = 0; l < k; ++l) {
      // beta_lambda = g_{lambda lambda} beta^lambda, and likewise for d beta_lambda
      w.add(idx(hydro_T(l, mu)), -(g.sign(l) * f.d(mu, hydro_beta(l))));
      w.add(idx(hydro_beta(l)), g.sign(l) * f.d(mu, hydro_T(l, mu)));
    }
  }
  return w;
}

bool EquilibriumReport::families_ok() const {
  return std::all_of(families.begin(), families.end(), [](const ConditionFamily& f) { return f.ok(); });
}

const ConditionFamily& EquilibriumReport::family(const std::string& name) const {
  for (const auto& f : families) {
    if (f.name == name) return f;
  }
  throw InvalidArgument("unknown condition family " + name);
}

EquilibriumReport equilibrium_conditions_residual(const SmoothMap& psi, int k, const SampleConfig& config) {
  check_section(psi, k);
  const MinkowskiMetric g(k);
  SectionFields f{psi, k, psi.bindings()};
  EquilibriumReport r;
  auto family = [&](std::string name) -> ConditionFamily& {
    r.families.push_back({std::move(name), {}, {}});
    return r.families.back();
  };
  {
    auto& fam = family("dxi");
    for (int mu = 0; mu < k; ++mu) fam.residuals.push_back(f.d(mu, "xi"));
  }
  auto divergence = [&](auto name_of) {
    Expr e = 0;
    for (int mu = 0; mu < k; ++mu) e = e + f.d(mu, name_of(mu));
    return e;
  };
  family("divN").residuals.push_back(divergence(hydro_N));
  family("divP").residuals.push_back(divergence(hydro_P));
  {
    auto& fam = family("dV");
    for (int mu = 0; mu < k; ++mu) fam.residuals.push_back(f.d(mu, "V"));
  }
  {
    auto& fam = family("dbeta");
    for (int mu = 0; mu < k; ++mu) {
      for (int l = 0; l < k; ++l) fam.residuals.push_back(g.sign(l) * f.d(mu, hydro_beta(l)));
    }
  }
  {
    auto& fam = family("divT");
    for (int nu = 0; nu < k; ++nu) {
      Expr e = 0;
      for (int mu = 0; mu < k; ++mu) e = e + f.d(mu, hydro_T(mu, nu));
      fam.residuals.push_back(e);
    }
  }
  family("divS").residuals.push_back(divergence(hydro_S));

  std::vector<Expr> all = psi.components();
  for (const auto& fam : r.families) all.insert(all.end(), fam.residuals.begin(), fam.residuals.end());
  SampleSet samples(domain_for(psi.source(), all), config);
  for (auto& fam : r.families) {
    fam.test.points_used = static_cast<int>(samples.size());
    for (const auto& e : fam.residuals) {
      if (!e.is_zero()) absorb(fam.test, zero_test(e, samples));
    }
  }
  HamiltonianSystem sys(hydro_structure(k), ReebFrame{[&] {
                          std::vector<VectorField> reeb;
                          for (int mu = 0; mu < k; ++mu) reeb.push_back(VectorField::coordinate(psi.target(), hydro_S(mu)));
                          return reeb;
                        }()},
                        Expr(0));
  r.hddw = section_residual(sys, psi, config);
  return r;
}

// ---------------------------------------------------------------------------
// Fluid tensors

std::vector<Expr> FluidTensors::beta() const {
  std::vector<Expr> b;
  for (const auto& c : u) b.push_back(c / temperature);
  return b;
}

Expr normalization_defect(const FluidTensors& f) {
  const MinkowskiMetric g(f.dim());
  Expr e = -1;
  for (int mu = 0; mu < f.dim(); ++mu) e = e + g.sign(mu) * f.u[at(mu)] * f.u[at(mu)];
  return e;
}

ExprMatrix delta_projector(const std::vector<Expr>& u) {
  const int k = static_cast<int>(u.size());
  const MinkowskiMetric g(k);
  ExprMatrix d(u.size(), std::vector<Expr>(u.size()));
  for (int mu = 0; mu < k; ++mu) {
    for (int nu = 0; nu < k; ++nu) d[at(mu)][at(nu)] = g(mu, nu) - u[at(mu)] * u[at(nu)];
  }
  return d;
}

ShearProjector::ShearProjector(const std::vector<Expr>& u) : data_(256) {
  if (u.size() != 4) throw DimensionNot4("the shear projector is defined for four dimensions");
  const MinkowskiMetric g(4);
  const ExprMatrix up = delta_projector(u);
  // mixed[mu][a] = Delta^mu_a, low[a][b] = Delta_{ab}
  ExprMatrix mixed = up, low = up;
  for (int mu = 0; mu < 4; ++mu) {
    for (int a = 0; a < 4; ++a) {
      mixed[at(mu)][at(a)] = g.sign(a) * up[at(mu)][at(a)];
      low[at(mu)][at(a)] = g.sign(mu) * g.sign(a) * up[at(mu)][at(a)];
    }
  }
  const Expr third = Expr(Rational(2, 3));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          data_[at(((mu * 4 + nu) * 4 + a) * 4 + b)] =
              Expr(Rational(1, 2)) * (mixed[at(mu)][at(a)] * mixed[at(nu)][at(b)] + mixed[at(mu)][at(b)] * mixed[at(nu)][at(a)] -
                                      third * up[at(mu)][at(nu)] * low[at(a)][at(b)]);
        }
      }
    }
  }
}

ExprMatrix lower_both(const ExprMatrix& a) {
  const MinkowskiMetric g(static_cast<int>(a.size()));
  ExprMatrix out = a;
  for (std::size_t mu = 0; mu < a.size(); ++mu) {
    for (std::size_t nu = 0; nu < a.size(); ++nu) {
      out[mu][nu] = g.sign(static_cast<int>(mu)) * g.sign(static_cast<int>(nu)) * a[mu][nu];
    }
  }
  return out;
}

ExprMatrix project_traceless(const ShearProjector& p, const ExprMatrix& a) {
  ExprMatrix out(4, std::vector<Expr>(4, Expr(0)));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      std::vector<Expr> terms;
      for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y) terms.push_back(p(mu, nu, x, y) * a[at(x)][at(y)]);
      }
      out[at(mu)][at(nu)] = Expr::sum(std::move(terms));
    }
  }
  return out;
}

Expr contract(const ExprMatrix& a, const ExprMatrix& b) {
  const ExprMatrix low = lower_both(b);
  std::vector<Expr> terms;
  for (std::size_t mu = 0; mu < a.size(); ++mu) {
    for (std::size_t nu = 0; nu < a.size(); ++nu) terms.push_back(a[mu][nu] * low[mu][nu]);
  }
  return Expr::sum(std::move(terms));
}

}  // namespace kontact
