#include "kontact/legendrian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "kontact/errors.hpp"
#include "kontact/linalg.hpp"

namespace kontact {

namespace {

bool in(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

ZeroTest all_zero(const std::vector<Expr>& exprs, const SampleSet& samples) {
  ZeroTest acc;
  acc.points_used = static_cast<int>(samples.size());
  for (const auto& e : exprs) {
    if (!e.is_zero()) absorb(acc, zero_test(e, samples));
  }
  return acc;
}

/// Jacobian of phi at u, target rows by source columns.
Eigen::MatrixXd jacobian_at(const std::vector<std::vector<Expr>>& jac, const Point& u) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(jac.size()),
                                            jac.empty() ? 0 : static_cast<Eigen::Index>(jac.front().size()));
  for (std::size_t i = 0; i < jac.size(); ++i) {
    for (std::size_t j = 0; j < jac[i].size(); ++j) {
      if (!jac[i][j].is_zero()) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate_double(jac[i][j], u);
    }
  }
  return m;
}

}  // namespace

std::vector<int> ParametrizingKFunction::J() const {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i) {
    if (!in(I, i)) out.push_back(i);
  }
  return out;
}

void ParametrizingKFunction::validate() const {
  if (n < 1 || k < 1) throw InvalidArgument("k-function needs n, k >= 1");
  if (static_cast<int>(F.size()) != k) throw LengthMismatch("k-function needs exactly k components");
  std::set<int> seen;
  for (int i : I) {
    if (i < 1 || i > n || !seen.insert(i).second) throw InvalidArgument("I must be distinct indices in 1..n");
  }
  for (int a = 1; a <= k; ++a) {
    std::set<std::string> allowed;
    for (int j : J()) allowed.insert(canonical_q(j));
    for (int i : I) allowed.insert(canonical_p(a, i));
    for (const auto& v : free_variables(F[static_cast<std::size_t>(a - 1)])) {
      if (!allowed.count(v)) {
        throw InvalidArgument("F^" + std::to_string(a) + " depends on '" + v + "', which is not one of its parameters");
      }
    }
  }
}

Chart parameter_chart(const ParametrizingKFunction& f) {
  std::vector<std::string> names;
  for (int j : f.J()) names.push_back(canonical_q(j));
  for (int a = 1; a <= f.k; ++a) {
    for (int i : f.I) names.push_back(canonical_p(a, i));
  }
  if (names.empty()) throw InvalidArgument("empty parameter chart");
  return Chart(names);
}

CompatibilityReport check_compatibility(const ParametrizingKFunction& f, const SampleConfig& config) {
  f.validate();
  CompatibilityReport r;
  std::vector<Expr> diffs;
  r.linear_form = !f.I.empty();
  for (int i : f.I) {
    std::vector<Expr> partials;
    for (int a = 1; a <= f.k; ++a) partials.push_back(differentiate(f.F[static_cast<std::size_t>(a - 1)], canonical_p(a, i)));
    for (std::size_t a = 1; a < partials.size(); ++a) {
      diffs.push_back(partials[a] - partials[0]);
      if (partials[a] != partials[0]) r.linear_form = false;
    }
    for (const auto& pa : partials) {
      for (const auto& v : free_variables(pa)) {
        if (v.rfind("p_", 0) == 0) r.linear_form = false;
      }
    }
  }
  if (r.linear_form) {
    for (int a = 1; a <= f.k; ++a) {
      Expr rest = f.F[static_cast<std::size_t>(a - 1)];
      for (int i : f.I) rest = rest - var(canonical_p(a, i)) * differentiate(f.F[static_cast<std::size_t>(a - 1)], canonical_p(a, i));
      if (!rest.is_zero()) r.linear_form = false;
    }
  }
  if (diffs.empty()) {
    r.compatible = true;
    return r;
  }
  SampleSet samples(domain_for(parameter_chart(f), diffs), config);
  ZeroTest t = all_zero(diffs, samples);
  r.compatible = t.zero();
  r.max_residual = t.max_residual;
  return r;
}

LegendrianParametrization build_parametrization(const ParametrizingKFunction& f, const SampleConfig& config) {
  if (!check_compatibility(f, config).compatible) {
    throw IncompatibleKFunction("dF^a/dp_a_i differ between components");
  }
  const KContactStructure ambient = canonical_structure(f.n, f.k);
  const Chart& target = ambient.chart();
  Chart source = parameter_chart(f);
  std::vector<Expr> comps;
  for (int a = 1; a <= f.k; ++a) {
    const Expr& Fa = f.F[static_cast<std::size_t>(a - 1)];
    Expr s = Fa;
    for (int i : f.I) s = s - var(canonical_p(a, i)) * differentiate(Fa, canonical_p(a, i));
    comps.push_back(s);
  }
  for (int l = 1; l <= f.n; ++l) {
    comps.push_back(in(f.I, l) ? -differentiate(f.F[0], canonical_p(1, l)) : var(canonical_q(l)));
  }
  for (int a = 1; a <= f.k; ++a) {
    for (int l = 1; l <= f.n; ++l) {
      comps.push_back(in(f.I, l) ? var(canonical_p(a, l)) : differentiate(f.F[static_cast<std::size_t>(a - 1)], canonical_q(l)));
    }
  }
  LegendrianParametrization out{SmoothMap(source, target, comps), {}};
  for (int i : f.I) out.complement.push_back(VectorField::coordinate(target, canonical_q(i)));
  for (int a = 1; a <= f.k; ++a) {
    for (int j : f.J()) out.complement.push_back(VectorField::coordinate(target, canonical_p(a, j)));
  }
  return out;
}

Point image_point(const SmoothMap& phi, const Point& u) {
  Point x;
  for (int i = 0; i < phi.target().dim(); ++i) {
    x.emplace(phi.target().coordinate(i), evaluate(phi.components()[static_cast<std::size_t>(i)], u));
  }
  return x;
}

std::string IsotropyReport::summary() const {
  std::ostringstream os;
  os << (isotropic ? "isotropic" : "not isotropic");
  if (certificate) os << "; Legendrian certificate: " << (*certificate ? "found" : "not found");
  return os.str();
}

IsotropyReport verify_isotropic(const SmoothMap& phi, const KContactStructure& s, const SampleConfig& config,
                                const std::vector<VectorField>* complement, int n_points) {
  require_same_chart(phi.target(), s.chart());
  std::vector<Expr> exprs;
  for (const auto* forms : {&s.eta(), &s.d_eta()}) {
    for (const auto& w : *forms) {
      const DifferentialForm pb = pullback(phi, w);
      for (const auto& [k, c] : pb.terms()) exprs.push_back(c);
    }
  }
  IsotropyReport r;
  std::vector<Expr> domain_exprs = exprs;
  domain_exprs.insert(domain_exprs.end(), phi.components().begin(), phi.components().end());
  SampleSet samples(domain_for(phi.source(), domain_exprs), config);
  ZeroTest t = all_zero(exprs, samples);
  r.isotropic = t.zero();
  r.max_residual = t.max_residual;
  if (!complement) return r;

  bool found = r.isotropic;
  std::vector<Expr> pairings;
  for (std::size_t i = 0; i < complement->size(); ++i) {
    for (std::size_t j = i + 1; j < complement->size(); ++j) {
      for (const auto& w : s.d_eta()) pairings.push_back(substitute(pairing(w, (*complement)[i], (*complement)[j]), phi.bindings()));
    }
  }
  if (found) found = all_zero(pairings, samples).zero();
  if (found) {
    const ReebFrame reeb = compute_reeb(s, config);
    const auto jac = phi.jacobian();
    SampleConfig cfg = config;
    cfg.n_points = n_points;
    SampleSet rank_points(domain_for(phi.source(), domain_exprs), cfg);
    for (const auto& u : rank_points.points()) {
      const Point x = image_point(phi, u);
      Eigen::MatrixXd tl = jacobian_at(jac, u);
      Eigen::MatrixXd w = field_matrix(*complement, x);
      Eigen::MatrixXd rf = field_matrix(reeb.fields, x);
      Eigen::MatrixXd all(s.dim(), tl.cols() + w.cols() + rf.cols());
      all << tl, w, rf;
      if (numeric_rank(all, cfg.rank_threshold) != s.dim()) found = false;
    }
  }
  r.certificate = found;
  return r;
}

bool maximality_witness(const SmoothMap& phi, const KContactStructure& s, const std::vector<VectorField>& w,
                        const SampleConfig& config, int n_points) {
  require_same_chart(phi.target(), s.chart());
  SampleConfig cfg = config;
  cfg.n_points = n_points;
  SampleSet samples(domain_for(phi.source(), phi.components()), cfg);
  const auto jac = phi.jacobian();
  for (const auto& u : samples.points()) {
    const Point x = image_point(phi, u);
    const Eigen::MatrixXd tl = jacobian_at(jac, u);
    const auto omegas = d_eta_matrices(s, x);
    const Eigen::MatrixXd wm = field_matrix(w, x);
    for (Eigen::Index c = 0; c < wm.cols(); ++c) {
      double best = 0.0, scale = 1.0;
      for (const auto& om : omegas) {
        const Eigen::RowVectorXd pairs = wm.col(c).transpose() * om * tl;
        best = std::max(best, pairs.cwiseAbs().maxCoeff());
        scale = std::max(scale, wm.col(c).norm() * om.norm() * tl.norm());
      }
      if (best <= 1e3 * (cfg.atol + cfg.rtol * scale)) return false;
    }
  }
  return true;
}

int legendrian_dimension(int n, int k, int n1) {
  if (n < 1 || k < 1 || n1 < 0 || n1 > n) throw InvalidArgument("need n, k >= 1 and 0 <= n1 <= n");
  return n + (k - 1) * n1;
}

// ---------------------------------------------------------------------------
// Thermodynamics

KContactStructure thermo_structure() {
  Chart c({"E", "P", "V", "T", "S", "mu", "N"});
  auto d = [&](const char* name) { return DifferentialForm::basis(c, name); };
  return KContactStructure({d("E") - var("T") * d("S") - var("mu") * d("N") + var("P") * d("V")});
}

SmoothMap thermo_parametrization(const Expr& f) {
  Chart src({"S", "V", "N"});
  for (const auto& v : free_variables(f)) {
    if (!src.find(v)) throw InvalidArgument("equation of state may only use S, V, N");
  }
  return SmoothMap(src, thermo_structure().chart(),
                   {f, -differentiate(f, "V"), var("V"), differentiate(f, "S"), var("S"), differentiate(f, "N"), var("N")});
}

std::vector<VectorField> thermo_complement() {
  const Chart c = thermo_structure().chart();
  return {VectorField::coordinate(c, "T"), VectorField::coordinate(c, "P"), VectorField::coordinate(c, "mu")};
}

Expr ideal_gas_energy(const Rational& cv) {
  if (sgn(cv) <= 0) throw InvalidArgument("cv must be positive");
  return pow(var("V"), -1 / cv) * exp(var("S") / (cv * var("N")));
}

GibbsReport check_gibbs_equality(const Expr& f, const SmoothMap& L, const SampleConfig& config) {
  Chart svn({"S", "V", "N"});
  const Expr S = var("S"), V = var("V"), N = var("N");
  Expr euler = S * differentiate(f, "S") + V * differentiate(f, "V") + N * differentiate(f, "N") - f;
  SampleSet samples(domain_for(svn, {f, euler}), config);
  if (!zero_test(euler, samples).zero()) throw NotHomogeneous("f is not homogeneous of degree one");
  const auto& b = L.bindings();
  for (const char* name : {"E", "P", "V", "T", "S", "mu", "N"}) {
    if (!b.count(name)) throw ChartMismatch("Gibbs check needs a map into the thermodynamic chart");
  }
  Expr gibbs = b.at("E") + b.at("P") * b.at("V") - b.at("T") * b.at("S") - b.at("mu") * b.at("N");
  SampleSet on_l(domain_for(L.source(), {gibbs}), config);
  ZeroTest t = zero_test(gibbs, on_l);
  return {t.zero(), t.max_residual};
}

}  // namespace kontact
