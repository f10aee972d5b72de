#include "kontact/bjorken.hpp"

#include <algorithm>

#include "kontact/errors.hpp"

namespace kontact {

namespace {

const std::vector<std::string>& coords() {
  static const std::vector<std::string> c{"t", "x", "y", "z"};
  return c;
}

std::size_t at(int i) { return static_cast<std::size_t>(i); }

int sign(int mu) { return mu == 0 ? 1 : -1; }

ExprMatrix zeros() { return ExprMatrix(4, std::vector<Expr>(4, Expr(0))); }

void require4(const std::vector<Expr>& u) {
  if (u.size() != 4) throw DimensionNot4("flows live on the (t, x, y, z) chart");
}

}  // namespace

Chart minkowski_chart() {
  const Expr t = var("t"), z = var("z");
  return Chart(coords(), {t * t - z * z}, {{"t", {Rational(1), Rational(3)}}, {"z", {Rational(-1), Rational(1)}}});
}

Expr default_temperature_profile() { return pow(var("tau"), Rational(-1, 3)); }

BjorkenFlow::BjorkenFlow(const Expr& profile) : chart(minkowski_chart()) {
  for (const auto& v : free_variables(profile)) {
    if (v != "tau") throw InvalidArgument("temperature profile may only use tau");
  }
  const Expr t = var("t"), z = var("z");
  tau = sqrt(t * t - z * z);
  u = {t / tau, Expr(0), Expr(0), z / tau};
  temperature = substitute(profile, {{"tau", tau}});
}

Expr expansion_scalar(const std::vector<Expr>& u) {
  require4(u);
  Expr e = 0;
  for (int mu = 0; mu < 4; ++mu) e = e + differentiate(u[at(mu)], coords()[at(mu)]);
  return e;
}

Expr comoving_derivative(const std::vector<Expr>& u, const Expr& f) {
  require4(u);
  Expr e = 0;
  for (int mu = 0; mu < 4; ++mu) e = e + u[at(mu)] * differentiate(f, coords()[at(mu)]);
  return e;
}

ExprMatrix velocity_gradient(const std::vector<Expr>& u) {
  require4(u);
  ExprMatrix g = zeros();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) g[at(a)][at(b)] = sign(a) * differentiate(u[at(b)], coords()[at(a)]);
  }
  return g;
}

ExprMatrix shear_tensor(const std::vector<Expr>& u) { return project_traceless(ShearProjector(u), velocity_gradient(u)); }

Expr sigma_identity_defect(const std::vector<Expr>& u) {
  const ExprMatrix s = shear_tensor(u);
  const Expr theta = expansion_scalar(u);
  return contract(s, s) - Expr(Rational(2, 3)) * theta * theta;
}

bool check_sigma_identity(const std::vector<Expr>& u, const SampleDomain& domain, const SampleConfig& config) {
  const Expr e = sigma_identity_defect(u);
  if (e.is_zero()) return true;
  SampleDomain d = domain;
  d.add_variables(free_variables(e));
  return is_probably_zero(e, d, config);
}

Expr temperature_scalar(const PGTSuperpotential& s, const BjorkenFlow& f) {
  return substitute(s.I, {{"T", f.temperature}});
}

std::vector<Expr> superpotential(const PGTSuperpotential& s, const BjorkenFlow& f) {
  const Expr gi = s.gamma * temperature_scalar(s, f);
  const ExprMatrix d = delta_projector(f.u);
  std::vector<Expr> phi(64, Expr(0));
  for (int l = 0; l < 4; ++l) {
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        phi[at((l * 4 + mu) * 4 + nu)] = gi * (f.u[at(mu)] * d[at(l)][at(nu)] - f.u[at(nu)] * d[at(l)][at(mu)]);
      }
    }
  }
  return phi;
}

ExprMatrix pgt_shift(const std::vector<Expr>& phi) {
  if (phi.size() != 64) throw DimensionNot4("superpotential needs 64 components");
  auto p = [&](int a, int b, int c) { return phi[at((a * 4 + b) * 4 + c)]; };
  ExprMatrix out = zeros();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      std::vector<Expr> terms;
      for (int l = 0; l < 4; ++l) terms.push_back(differentiate(p(l, mu, nu) - p(mu, l, nu) - p(nu, l, mu), coords()[at(l)]));
      out[at(mu)][at(nu)] = Expr(Rational(1, 2)) * Expr::sum(std::move(terms));
    }
  }
  return out;
}

std::vector<Expr> divergence(const ExprMatrix& a) {
  std::vector<Expr> out;
  for (int nu = 0; nu < 4; ++nu) {
    std::vector<Expr> terms;
    for (int mu = 0; mu < 4; ++mu) terms.push_back(differentiate(a[at(mu)][at(nu)], coords()[at(mu)]));
    out.push_back(Expr::sum(std::move(terms)));
  }
  return out;
}

ExprMatrix DissipativeDecomposition::tensor(const std::vector<Expr>& u) const {
  const ExprMatrix d = delta_projector(u);
  ExprMatrix t = zeros();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      t[at(mu)][at(nu)] = energy * u[at(mu)] * u[at(nu)] - (pv + bulk) * d[at(mu)][at(nu)] + shear[at(mu)][at(nu)];
    }
  }
  return t;
}

DissipativeDecomposition perfect_fluid(const Expr& e, const Expr& p, const BjorkenFlow& f) {
  return {substitute(e, {{"T", f.temperature}}), substitute(p, {{"T", f.temperature}}), Expr(0), zeros()};
}

DissipativeDecomposition decompose(const ExprMatrix& t, const std::vector<Expr>& u) {
  require4(u);
  const ExprMatrix low = lower_both(t);
  const ExprMatrix d = delta_projector(u);
  std::vector<Expr> e, iso;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      e.push_back(sign(mu) * sign(nu) * u[at(mu)] * u[at(nu)] * t[at(mu)][at(nu)]);
      iso.push_back(d[at(mu)][at(nu)] * low[at(mu)][at(nu)]);
    }
  }
  return {Expr::sum(std::move(e)), Expr(Rational(-1, 3)) * Expr::sum(std::move(iso)), Expr(0),
          project_traceless(ShearProjector(u), t)};
}

DissipativeDecomposition apply_pgt(const DissipativeDecomposition& d, const PGTSuperpotential& s, const BjorkenFlow& f) {
  const Expr i = temperature_scalar(s, f);
  const Expr theta = expansion_scalar(f.u);
  const ExprMatrix sigma = shear_tensor(f.u);
  DissipativeDecomposition out = d;
  out.energy = d.energy + s.gamma * i * theta;
  out.pv = d.pv - s.gamma * comoving_derivative(f.u, i);
  out.bulk = d.bulk - Expr(Rational(2, 3)) * s.gamma * i * theta;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) out.shear[at(mu)][at(nu)] = d.shear[at(mu)][at(nu)] - s.gamma * i * sigma[at(mu)][at(nu)];
  }
  return out;
}

Expr entropy_production(const DissipativeDecomposition& d, const BjorkenFlow& f) {
  return contract(d.shear, shear_tensor(f.u)) - d.bulk * expansion_scalar(f.u);
}

// ---------------------------------------------------------------------------

bool PGTDemoReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.ok(); });
}

const NamedCheck& PGTDemoReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("unknown check " + name);
}

PGTDemoReport full_pgt_demo(const PGTDemoParams& params, const SampleConfig& config) {
  const BjorkenFlow flow(params.profile);
  const Expr theta = expansion_scalar(flow.u);
  const ExprMatrix sigma = shear_tensor(flow.u);

  std::vector<std::pair<std::string, std::vector<Expr>>> groups;
  groups.push_back({"theta_identity", {theta - 1 / flow.tau}});
  {
    std::vector<Expr> ortho, trace;
    Expr tr = 0;
    for (int nu = 0; nu < 4; ++nu) {
      Expr e = 0;
      for (int mu = 0; mu < 4; ++mu) e = e + sign(mu) * flow.u[at(mu)] * sigma[at(mu)][at(nu)];
      ortho.push_back(e);
      tr = tr + sign(nu) * sigma[at(nu)][at(nu)];
    }
    groups.push_back({"sigma_orthogonal", ortho});
    groups.push_back({"sigma_traceless", {tr}});
  }
  groups.push_back({"sigma_identity", {sigma_identity_defect(flow.u)}});
  const auto phi = superpotential(params.pgt, flow);
  {
    std::vector<Expr> anti;
    for (int l = 0; l < 4; ++l) {
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) anti.push_back(phi[at((l * 4 + mu) * 4 + nu)] + phi[at((l * 4 + nu) * 4 + mu)]);
      }
    }
    groups.push_back({"antisymmetry", anti});
  }
  groups.push_back({"divergence_free_shift", divergence(pgt_shift(phi))});
  const auto before = perfect_fluid(params.energy, params.pressure, flow);
  groups.push_back({"entropy_before", {entropy_production(before, flow)}});
  groups.push_back({"entropy_after", {entropy_production(apply_pgt(before, params.pgt, flow), flow)}});

  std::vector<Expr> all;
  for (const auto& [name, es] : groups) all.insert(all.end(), es.begin(), es.end());
  const SampleSet samples(domain_for(flow.chart, all), config);
  PGTDemoReport r;
  for (const auto& [name, es] : groups) {
    NamedCheck c{name, {}};
    c.test.points_used = static_cast<int>(samples.size());
    for (const auto& e : es) {
      if (!e.is_zero()) absorb(c.test, zero_test(e, samples));
    }
    r.max_residual = std::max(r.max_residual, c.test.max_residual);
    r.checks.push_back(std::move(c));
  }
  return r;
}

}  // namespace kontact
