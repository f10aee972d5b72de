#include "kontact/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kontact/bjorken.hpp"
#include "kontact/errors.hpp"
#include "kontact/hddw.hpp"
#include "kontact/hydro.hpp"
#include "kontact/io.hpp"
#include "kontact/legendrian.hpp"
#include "kontact/parse.hpp"

namespace kontact {

using ojson = nlohmann::ordered_json;

namespace {

enum class Verdict { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "fail";
}

Verdict from_bool(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

Verdict from_test(const ZeroTest& t) {
  switch (t.verdict) {
    case ZeroVerdict::Zero: return Verdict::Pass;
    case ZeroVerdict::NonZero: return Verdict::Fail;
    case ZeroVerdict::Inconclusive: return Verdict::Inconclusive;
  }
  return Verdict::Fail;
}

std::string to_string(const Expr& e) {
  std::ostringstream ss;
  ss << e;
  return ss.str();
}

struct Report {
  std::string command;
  ojson config;
  ojson checks = ojson::array();
  ojson extra = ojson::object();
  std::vector<Verdict> verdicts;
  double max_residual = 0.0;

  void add(const std::string& name, Verdict v, double residual = 0.0, ojson detail = ojson::object()) {
    ojson c;
    c["name"] = name;
    c["verdict"] = verdict_name(v);
    c["max_residual"] = residual;
    for (auto& [key, value] : detail.items()) c[key] = value;
    checks.push_back(std::move(c));
    verdicts.push_back(v);
    max_residual = std::max(max_residual, residual);
  }

  void add(const std::string& name, const ZeroTest& t, ojson detail = ojson::object()) {
    add(name, from_test(t), t.max_residual, std::move(detail));
  }

  Verdict overall() const {
    bool inconclusive = false;
    for (Verdict v : verdicts) {
      if (v == Verdict::Fail) return Verdict::Fail;
      if (v == Verdict::Inconclusive) inconclusive = true;
    }
    return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
  }

  int exit_code() const {
    switch (overall()) {
      case Verdict::Pass: return kExitPass;
      case Verdict::Fail: return kExitFail;
      case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitFail;
  }
};

struct Common {
  std::uint64_t seed = 42;
  int samples = 64;
  double atol = 1e-10;
  double rtol = 1e-9;
  double rank_threshold = 1e-8;
  std::string json_path;
  bool no_timestamp = false;

  SampleConfig config() const {
    SampleConfig c;
    c.seed = seed;
    c.n_points = samples;
    c.atol = atol;
    c.rtol = rtol;
    c.rank_threshold = rank_threshold;
    return c;
  }

  ojson echo() const {
    ojson j;
    j["seed"] = seed;
    j["samples"] = samples;
    j["atol"] = atol;
    j["rtol"] = rtol;
    j["rank_threshold"] = rank_threshold;
    return j;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--json", c.json_path, "Write the JSON report here (- for stdout)");
  app->add_option("--seed", c.seed, "Sampling seed");
  app->add_option("--samples", c.samples, "Sample points per zero test")->check(CLI::PositiveNumber);
  app->add_option("--atol", c.atol, "Absolute tolerance")->check(CLI::PositiveNumber);
  app->add_option("--rtol", c.rtol, "Relative tolerance")->check(CLI::PositiveNumber);
  app->add_option("--rank-threshold", c.rank_threshold, "Relative singular value cutoff")->check(CLI::PositiveNumber);
  app->add_flag("--no-timestamp", c.no_timestamp, "Omit wall time from the report");
}

ojson field_json(const VectorField& x) {
  ojson j = ojson::object();
  for (int i = 0; i < x.chart().dim(); ++i) {
    if (!x[i].is_zero()) j[x.chart().coordinate(i)] = to_string(x[i]);
  }
  return j;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw CLI::ValidationError("list", "bad number \"" + part + "\"");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify-structure and reeb

struct StructureArgs {
  std::string file;
  std::string builtin;
  int points = 100;
};

struct LoadedStructure {
  KContactStructure structure;
  std::vector<VectorField> polarization;
  std::vector<VectorField> expected_reeb;
};

LoadedStructure load_structure(const std::string& file, const std::string& builtin) {
  if (!builtin.empty() && !file.empty()) throw CLI::ValidationError("structure", "give a file or --builtin, not both");
  if (!builtin.empty()) {
    auto b = resolve_builtin(builtin);
    return {b.structure, b.polarization, b.expected_reeb};
  }
  if (file.empty()) throw CLI::ValidationError("structure", "a definition file or --builtin is required");
  return {load_definition(file).structure(), {}, {}};
}

void reeb_checks(Report& r, const LoadedStructure& ls, const SampleConfig& cfg) {
  ReebFrame reeb;
  try {
    reeb = compute_reeb(ls.structure, cfg);
  } catch (const SingularSystem& e) {
    r.add("reeb_frame", Verdict::Fail, 0.0, {{"error", e.what()}});
    return;
  } catch (const ZeroTestInconclusive& e) {
    r.add("reeb_frame", Verdict::Inconclusive, 0.0, {{"error", e.what()}});
    return;
  }
  r.add("reeb_frame", check_reeb_frame(ls.structure, reeb, cfg));
  r.add("reeb_commute", from_bool(check_reeb_commutation(reeb, cfg)));
  if (!ls.expected_reeb.empty()) {
    bool same = ls.expected_reeb.size() == reeb.fields.size();
    for (std::size_t a = 0; same && a < reeb.fields.size(); ++a) same = reeb.fields[a].components() == ls.expected_reeb[a].components();
    r.add("reeb_expected", from_bool(same));
  }
  ojson fields = ojson::array();
  for (const auto& x : reeb.fields) fields.push_back(field_json(x));
  r.extra["reeb"] = fields;
}

Report cmd_verify_structure(const StructureArgs& a, const Common& c) {
  const LoadedStructure ls = load_structure(a.file, a.builtin);
  const SampleConfig cfg = c.config();
  Report r;
  const StructureReport s = verify_kcontact(ls.structure, cfg, a.points);
  r.extra["k"] = s.k;
  r.extra["dim"] = s.dim;
  const ojson detail{{"points", static_cast<int>(s.points.size())},
                     {"degenerate_points", static_cast<int>(s.degenerate_points.size())},
                     {"undefined_points", s.undefined_points}};
  r.add("condition1", from_bool(s.condition1), 0.0, detail);
  r.add("condition2", from_bool(s.condition2), 0.0, detail);
  r.add("condition3", from_bool(s.condition3), 0.0, detail);
  reeb_checks(r, ls, cfg);
  if (!ls.polarization.empty()) {
    const auto p = check_polarization(ls.structure, ls.polarization, cfg, std::min(a.points, 16));
    r.add("polarization", from_bool(p.ok()), p.max_residual,
          {{"rank", p.min_rank}, {"expected_rank", p.expected_rank}, {"annihilates", p.annihilates},
           {"isotropic", p.isotropic}, {"involutive", p.involutive}});
  }
  return r;
}

Report cmd_reeb(const StructureArgs& a, const Common& c) {
  const LoadedStructure ls = load_structure(a.file, a.builtin);
  Report r;
  reeb_checks(r, ls, c.config());
  return r;
}

// ---------------------------------------------------------------------------
// legendrian

struct LegendrianArgs {
  std::string file;
  std::string thermo;
  bool ideal_gas = false;
  std::string cv = "3/2";
  int hydro_k = 0;
};

Report cmd_legendrian(const LegendrianArgs& a, const Common& c) {
  const SampleConfig cfg = c.config();
  Report r;
  const int sources = !a.file.empty() + !a.thermo.empty() + a.ideal_gas + (a.hydro_k > 0);
  if (sources != 1) throw CLI::ValidationError("legendrian", "give exactly one of FILE, --thermo, --ideal-gas, --hydro");
  auto isotropy = [&](const SmoothMap& map, const KContactStructure& s, const std::vector<VectorField>& w) {
    const auto iso = verify_isotropic(map, s, cfg, &w);
    r.add("isotropic", from_bool(iso.isotropic), iso.max_residual);
    r.add("legendrian_certificate", from_bool(iso.certificate.value_or(false)));
    r.extra["summary"] = iso.summary();
    r.extra["dim_l"] = map.source().dim();
  };
  if (!a.file.empty()) {
    const auto kf = load_kfunction(a.file);
    const auto comp = check_compatibility(kf, cfg);
    r.add("compatible", from_bool(comp.compatible), comp.max_residual, {{"linear_form", comp.linear_form}});
    if (!comp.compatible) return r;
    const auto L = build_parametrization(kf, cfg);
    isotropy(L.map, canonical_structure(kf.n, kf.k), L.complement);
  } else if (a.hydro_k > 0) {
    const auto L = equilibrium_legendrian(a.hydro_k);
    isotropy(L.map, hydro_structure(a.hydro_k), L.complement);
  } else {
    const Expr f = a.ideal_gas ? ideal_gas_energy(parse_rational(a.cv)) : parse_expr(a.thermo);
    const auto L = thermo_parametrization(f);
    isotropy(L, thermo_structure(), thermo_complement());
    try {
      const auto g = check_gibbs_equality(f, L, cfg);
      r.add("gibbs", from_bool(g.holds), g.max_residual);
    } catch (const NotHomogeneous&) {
      r.extra["gibbs"] = "not applicable: equation of state is not homogeneous of degree one";
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// hddw

struct HddwArgs {
  std::string builtin;
  std::string system;
  std::string H;
  std::string point = "random";
  int points = 1;
  std::string shift;
  std::string section;
  std::string hydro_section;
  bool constrained = false;
};

Report cmd_hddw(const HddwArgs& a, const Common& c) {
  const SampleConfig cfg = c.config();
  std::optional<BuiltinStructure> builtin;
  std::optional<KContactStructure> loaded;
  Expr h = 0;
  if (!a.system.empty()) {
    if (!a.builtin.empty()) throw CLI::ValidationError("hddw", "give --system or --builtin, not both");
    const SystemFile sf = load_system(a.system);
    builtin = sf.builtin;
    loaded = sf.structure();
    h = sf.hamiltonian;
  } else if (!a.builtin.empty()) {
    builtin = resolve_builtin(a.builtin);
    loaded = builtin->structure;
  } else {
    throw CLI::ValidationError("hddw", "--builtin or --system is required");
  }
  const KContactStructure& structure = *loaded;
  if (!a.H.empty()) h = parse_expr(a.H);
  const HamiltonianSystem sys = builtin && !builtin->expected_reeb.empty()
                                    ? HamiltonianSystem(structure, ReebFrame{builtin->expected_reeb}, h)
                                    : HamiltonianSystem(structure, h, cfg);
  Report r;
  r.extra["k"] = sys.k();
  r.extra["dim"] = sys.dim();
  r.extra["H"] = to_string(h);

  std::vector<Point> points;
  if (a.point == "random") {
    SampleConfig pc = cfg;
    pc.n_points = a.points;
    points = SampleSet(structure.domain(), pc).points();
  } else {
    const auto xs = parse_list(a.point);
    if (static_cast<int>(xs.size()) != sys.dim()) throw CLI::ValidationError("--point", "needs one value per coordinate");
    points.push_back(point_from(structure.chart(), Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()))));
  }
  const int expected = expected_nullspace_dim(sys.k(), sys.dim());
  ojson dims = ojson::array();
  bool dims_ok = true, solved = true;
  double residual = 0.0;
  std::optional<HdDWPointSolution> first;
  for (const auto& p : points) {
    try {
      auto sol = solve_hddw_at_point(sys, p, cfg);
      dims.push_back(sol.nullspace_dim());
      dims_ok = dims_ok && sol.nullspace_dim() == expected;
      residual = std::max(residual, sol.residual_norm);
      if (!first) first = std::move(sol);
    } catch (const StructureDegenerateAtPoint& e) {
      solved = false;
      r.extra["error"] = e.what();
    } catch (const InconsistentSystem& e) {
      solved = false;
      r.extra["error"] = e.what();
    }
  }
  r.add("solvable", from_bool(solved), residual, {{"points", static_cast<int>(points.size())}});
  r.add("nullspace_dim", from_bool(solved && dims_ok), 0.0,
        {{"nullspace_dim", first ? first->nullspace_dim() : -1}, {"expected", expected}, {"per_point", dims}});
  if (first) {
    ojson particular = ojson::array();
    for (Eigen::Index al = 0; al < first->particular.rows(); ++al) {
      ojson row = ojson::object();
      for (int i = 0; i < sys.dim(); ++i) row[structure.chart().coordinate(i)] = first->particular(al, i);
      particular.push_back(row);
    }
    r.extra["particular"] = particular;
  }
  if (!a.shift.empty() && first) {
    const auto shifted = pseudo_gauge_shift(*first, parse_list(a.shift));
    const double tol = solution_tolerance(shifted.system, shifted.particular);
    r.add("shift_residual", from_bool(shifted.residual_norm <= tol), shifted.residual_norm);
  }
  if (!a.section.empty()) {
    const auto psi = parse_section(read_file(a.section), structure.chart());
    const auto s = section_residual(sys, psi, cfg);
    r.add("section_first", s.first_test);
    r.add("section_second", s.second_test);
  }
  if (!a.hydro_section.empty()) {
    int k = 0;
    const auto psi = parse_hydro_section(read_file(a.hydro_section), &k);
    const auto e = equilibrium_conditions_residual(psi, k, cfg);
    for (const auto& f : e.families) r.add("equilibrium_" + f.name, f.test);
    r.add("hddw_agreement", from_bool(e.agrees()), e.hddw.max_residual(), {{"hddw_residual_zero", e.hddw.ok()}});
  }
  if (a.constrained) {
    std::optional<int> k;
    if (builtin && builtin->name.rfind("hydro", 0) == 0) k = sys.k();
    if (!k) throw CLI::ValidationError("--constrained", "needs a hydro structure");
    const auto L = equilibrium_legendrian(*k);
    const auto cr = check_constrained_solution(sys, L.map, cfg);
    r.add("constrained_hamiltonian", from_bool(cr.hamiltonian_vanishes), cr.hamiltonian_residual);
    r.add("constrained_feasible", from_bool(cr.feasible), cr.max_residual);
    r.add("constrained_nullspace", from_bool(cr.nullspace_consistent && cr.constrained_nullspace == cr.predicted), 0.0,
          {{"constrained_nullspace", cr.constrained_nullspace}, {"predicted", cr.predicted}, {"dim_l", cr.dim_l}});
  }
  return r;
}

// ---------------------------------------------------------------------------
// ideal-gas

struct IdealGasArgs {
  std::string cv = "3/2";
  double t_end = 1.0;
  double dt = 1e-3;
  double order_dt = 0.1;
  std::string csv;
  std::string x0;
};

double max_rel_dev(const Trajectory& tr, int i, const std::function<double(double)>& expected) {
  double m = 0.0;
  for (std::size_t r = 0; r < tr.states.size(); ++r) {
    const double e = expected(tr.times[r]);
    m = std::max(m, std::abs(tr.states[r](i) - e) / std::max(std::abs(e), 1e-300));
  }
  return m;
}

Report cmd_ideal_gas(const IdealGasArgs& a, const Common& c, std::ostream& out) {
  const SampleConfig cfg = c.config();
  const Expr f = ideal_gas_energy(parse_rational(a.cv));
  const HamiltonianSystem sys(thermo_structure(), ReebFrame{{VectorField::coordinate(thermo_structure().chart(), "E")}},
                              isentropic_hamiltonian(f));
  const SmoothMap L = thermo_parametrization(f);
  Eigen::VectorXd x0(7);
  if (a.x0.empty()) {
    const Point u{{"S", Number::real(1.0)}, {"V", Number::real(1.0)}, {"N", Number::real(1.0)}};
    for (int i = 0; i < 7; ++i) x0(i) = evaluate_double(L.components()[static_cast<std::size_t>(i)], u);
  } else {
    const auto xs = parse_list(a.x0);
    if (xs.size() != 7) throw CLI::ValidationError("--x0", "needs E,P,V,T,S,mu,N");
    for (int i = 0; i < 7; ++i) x0(i) = xs[static_cast<std::size_t>(i)];
  }
  const Trajectory tr = integrate_contact_flow(sys, x0, a.t_end, a.dt, cfg);
  const int iV = 2, iS = 4, iN = 6;
  Report r;
  r.extra["cv"] = a.cv;
  r.extra["dt"] = a.dt;
  r.extra["t_end"] = a.t_end;
  r.extra["steps"] = static_cast<int>(tr.states.size()) - 1;
  const double ds = max_rel_dev(tr, iS, [&](double) { return x0(iS); });
  const double dn = max_rel_dev(tr, iN, [&](double) { return x0(iN); });
  const double dv = max_rel_dev(tr, iV, [&](double t) { return x0(iV) * std::exp(t); });
  r.add("entropy_constant", from_bool(ds < 1e-6), ds);
  r.add("particle_number_constant", from_bool(dn < 1e-6), dn);
  r.add("volume_exponential", from_bool(dv < 1e-6), dv);

  auto vmax = [&](double h) {
    const Trajectory t = integrate_contact_flow(sys, x0, a.t_end, h, cfg);
    double m = 0.0;
    for (std::size_t i = 0; i < t.states.size(); ++i) m = std::max(m, std::abs(t.states[i](iV) - x0(iV) * std::exp(t.times[i])));
    return m;
  };
  const double coarse = vmax(a.order_dt), fine = vmax(a.order_dt / 2);
  const double ratio = coarse / fine;
  r.add("fourth_order", from_bool(ratio >= 8.0 && ratio <= 32.0), 0.0,
        {{"dt", a.order_dt}, {"error_dt", coarse}, {"error_half_dt", fine}, {"ratio", ratio}});

  if (a.x0.empty()) {
    Chart t({"t_1"});
    std::map<std::string, Expr> curve{{"S", Expr(1)}, {"V", exp(var("t_1"))}, {"N", Expr(1)}};
    std::vector<Expr> comps;
    for (const auto& e : L.components()) comps.push_back(substitute(e, curve));
    const auto s = section_residual(sys, SmoothMap(t, L.target(), comps), cfg);
    r.add("section_residual", from_bool(s.ok() && s.max_residual() < 1e-6), s.max_residual());
  }
  if (!a.csv.empty()) {
    if (a.csv == "-") {
      tr.write_csv(out);
    } else {
      std::ofstream os(a.csv);
      if (!os) throw InvalidArgument("cannot write " + a.csv);
      tr.write_csv(os);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// bjorken

struct BjorkenArgs {
  std::string I = "T^3";
  std::string gamma = "gamma";
  std::string profile;
};

Report cmd_bjorken(const BjorkenArgs& a, const Common& c) {
  PGTDemoParams p;
  p.pgt.I = parse_expr(a.I);
  for (const auto& v : free_variables(p.pgt.I)) {
    if (v != "T") throw InvalidArgument("--I may only use T");
  }
  p.pgt.gamma = parse_expr(a.gamma);
  for (const auto& v : free_variables(p.pgt.gamma)) {
    if (v != "gamma") throw InvalidArgument("--gamma must be a constant or the symbol gamma");
  }
  if (!a.profile.empty()) p.profile = parse_expr(a.profile);
  const auto rep = full_pgt_demo(p, c.config());
  Report r;
  r.extra["I"] = to_string(p.pgt.I);
  r.extra["gamma"] = to_string(p.pgt.gamma);
  r.extra["T_profile"] = to_string(p.profile);
  ojson summary;
  for (const auto& ch : rep.checks) {
    r.add(ch.name, ch.test);
    summary[ch.name] = verdict_name(from_test(ch.test));
  }
  summary["max_residual"] = rep.max_residual;
  summary["seed"] = c.seed;
  r.extra["results"] = summary;
  return r;
}

// ---------------------------------------------------------------------------

void emit(const Report& r, const Common& c, double wall, std::ostream& out) {
  ojson j;
  j["command"] = r.command;
  j["config"] = c.echo();
  j["checks"] = r.checks;
  for (auto& [key, value] : r.extra.items()) j[key] = value;
  j["max_residual"] = r.max_residual;
  j["verdict"] = verdict_name(r.overall());
  if (!c.no_timestamp) j["wall_time"] = wall;
  const std::string text = j.dump(2) + "\n";
  if (c.json_path == "-") {
    out << text;
    return;
  }
  for (const auto& ch : r.checks) {
    out << std::left << std::setw(28) << ch["name"].get<std::string>() << ' ' << ch["verdict"].get<std::string>();
    if (ch["max_residual"].get<double>() > 0.0) out << "  (max residual " << ch["max_residual"].get<double>() << ")";
    out << '\n';
  }
  out << "verdict: " << verdict_name(r.overall()) << '\n';
  if (!c.json_path.empty()) {
    std::ofstream os(c.json_path, std::ios::binary);
    if (!os) throw InvalidArgument("cannot write " + c.json_path);
    os << text;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-contact geometry toolkit"};
  app.require_subcommand(1);
  Common common;
  if (const char* env = std::getenv("KONTACT_SEED")) {
    try {
      common.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: KONTACT_SEED is not an integer\n";
      return kExitUsage;
    }
  }

  StructureArgs sa;
  auto* verify = app.add_subcommand("verify-structure", "Check the k-contact conditions, Reeb frame and polarization");
  verify->add_option("file", sa.file, "Definition file");
  verify->add_option("--builtin", sa.builtin, "hydro4, hydro:k, canonical:n,k or thermo");
  verify->add_option("--points", sa.points, "Points for the rank conditions")->check(CLI::PositiveNumber);
  add_common(verify, common);

  auto* reeb = app.add_subcommand("reeb", "Compute the Reeb frame");
  reeb->add_option("file", sa.file, "Definition file");
  reeb->add_option("--builtin", sa.builtin, "Built-in structure");
  add_common(reeb, common);

  LegendrianArgs la;
  auto* leg = app.add_subcommand("legendrian", "Verify a Legendrian parametrization");
  leg->add_option("file", la.file, "k-function file");
  leg->add_option("--thermo", la.thermo, "Equation of state E(S, V, N)");
  leg->add_flag("--ideal-gas", la.ideal_gas, "Use the ideal-gas equation of state");
  leg->add_option("--cv", la.cv, "Heat capacity for --ideal-gas");
  leg->add_option("--hydro", la.hydro_k, "Equilibrium Legendrian of the hydro structure with this k");
  add_common(leg, common);

  HddwArgs ha;
  auto* hddw = app.add_subcommand("hddw", "Solve the HdDW equations at points and check sections");
  hddw->add_option("--builtin", ha.builtin, "Built-in structure");
  hddw->add_option("--system", ha.system, "System file");
  hddw->add_option("--H", ha.H, "Hamiltonian (overrides the system file)");
  hddw->add_option("--point", ha.point, "random or comma-separated coordinates");
  hddw->add_option("--points", ha.points, "Number of random points")->check(CLI::PositiveNumber);
  hddw->add_option("--shift", ha.shift, "Nullspace coefficients applied at the first point");
  hddw->add_option("--section", ha.section, "Section file");
  hddw->add_option("--hydro-section", ha.hydro_section, "Hydro section file");
  hddw->add_flag("--constrained", ha.constrained, "Tangent solutions along the equilibrium Legendrian");
  add_common(hddw, common);

  IdealGasArgs ia;
  auto* gas = app.add_subcommand("ideal-gas", "Integrate the isentropic ideal-gas flow");
  gas->add_option("--cv", ia.cv, "Heat capacity (rational)");
  gas->add_option("--t-end", ia.t_end, "Final time")->check(CLI::PositiveNumber);
  gas->add_option("--dt", ia.dt, "Step size")->check(CLI::PositiveNumber);
  gas->add_option("--order-dt", ia.order_dt, "Step size for the convergence-order check")->check(CLI::PositiveNumber);
  gas->add_option("--x0", ia.x0, "Initial state E,P,V,T,S,mu,N");
  gas->add_option("--csv", ia.csv, "Write the trajectory here (- for stdout)");
  add_common(gas, common);

  BjorkenArgs ba;
  auto* bj = app.add_subcommand("bjorken", "Bjorken flow and pseudo-gauge transformation checks");
  bj->alias("bjorken-demo");
  bj->add_option("--I", ba.I, "Scalar function of T");
  bj->add_option("--gamma", ba.gamma, "Constant or the symbol gamma");
  bj->add_option("--T-profile", ba.profile, "Temperature as a function of tau");
  add_common(bj, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Report r;
    if (*verify) {
      r = cmd_verify_structure(sa, common);
      r.command = "verify-structure";
    } else if (*reeb) {
      r = cmd_reeb(sa, common);
      r.command = "reeb";
    } else if (*leg) {
      r = cmd_legendrian(la, common);
      r.command = "legendrian";
    } else if (*hddw) {
      r = cmd_hddw(ha, common);
      r.command = "hddw";
    } else if (*gas) {
      r = cmd_ideal_gas(ia, common, out);
      r.command = "ideal-gas";
    } else {
      r = cmd_bjorken(ba, common);
      r.command = "bjorken";
    }
    r.config = common.echo();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(r, common, wall, out);
    return r.exit_code();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ZeroTestInconclusive& e) {
    err << "inconclusive: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace kontact
