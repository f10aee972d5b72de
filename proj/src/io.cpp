#include "kontact/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kontact/errors.hpp"
#include "kontact/hydro.hpp"
#include "kontact/parse.hpp"

namespace kontact {

using nlohmann::json;

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed JSON", line, column);
  }
}

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(where + ": missing \"" + key + "\"");
  return j.at(key);
}

std::string string_at(const json& j, const std::string& where) {
  if (!j.is_string()) throw InvalidArgument(where + ": expected a string");
  return j.get<std::string>();
}

Expr expr_at(const json& j, const std::string& where) {
  const std::string text = string_at(j, where);
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.detail(), e.line(), e.column());
  }
}

Rational rational_at(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  const std::string text = string_at(j, where);
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.detail(), e.line(), e.column());
  }
}

int int_at(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InvalidArgument(where + ": expected an integer");
  return j.get<int>();
}

std::vector<std::string> names_at(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidArgument(where + ": expected an array of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string_at(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Chart chart_at(const json& j, const std::string& where) {
  const auto coords = names_at(member(j, "coords", where), where + ".coords");
  std::vector<Expr> constraints;
  if (j.contains("constraints")) {
    const json& c = j.at("constraints");
    if (!c.is_array()) throw InvalidArgument(where + ".constraints: expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) constraints.push_back(expr_at(c[i], where + ".constraints[" + std::to_string(i) + "]"));
  }
  std::map<std::string, std::pair<Rational, Rational>> ranges;
  if (j.contains("ranges")) {
    for (const auto& [name, r] : j.at("ranges").items()) {
      const std::string w = where + ".ranges." + name;
      if (!r.is_array() || r.size() != 2) throw InvalidArgument(w + ": expected [low, high]");
      ranges[name] = {rational_at(r[0], w), rational_at(r[1], w)};
    }
  }
  return Chart(coords, constraints, ranges);
}

std::vector<int> index_tuple(const std::string& key, const std::string& where) {
  std::vector<int> idx;
  if (key.empty()) return idx;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      idx.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InvalidArgument(where + ": bad index tuple \"" + key + "\"");
    }
  }
  return idx;
}

DifferentialForm form_at(const json& j, const Chart& chart, const std::string& where) {
  const int degree = int_at(member(j, "degree", where), where + ".degree");
  if (degree < 0 || degree > chart.dim()) throw InvalidArgument(where + ": degree out of range");
  DifferentialForm f(chart, degree);
  const json& coeffs = member(j, "coeffs", where);
  if (!coeffs.is_object()) throw InvalidArgument(where + ".coeffs: expected an object");
  for (const auto& [key, value] : coeffs.items()) {
    const std::string w = where + ".coeffs." + key;
    auto idx = index_tuple(key, w);
    if (static_cast<int>(idx.size()) != degree) throw InvalidArgument(w + ": index count differs from degree");
    for (int i : idx) {
      if (i < 0 || i >= chart.dim()) throw InvalidArgument(w + ": index out of range");
    }
    const Expr c = expr_at(value, w);
    for (const auto& v : free_variables(c)) {
      if (!chart.find(v)) throw InvalidArgument(w + ": unknown variable " + v);
    }
    f.add(idx, c);
  }
  return f;
}

DefinitionFile definition_at(const json& j, const std::string& where) {
  DefinitionFile d;
  d.chart = chart_at(member(j, "chart", where), where + "chart");
  if (j.contains("forms")) {
    for (const auto& [name, f] : j.at("forms").items()) d.forms.emplace(name, form_at(f, d.chart, where + "forms." + name));
  }
  if (j.contains("eta")) {
    d.eta_names = names_at(j.at("eta"), where + "eta");
    for (const auto& n : d.eta_names) {
      if (!d.forms.count(n)) throw InvalidArgument(where + "eta: unknown form " + n);
    }
  }
  if (j.contains("maps")) {
    for (const auto& [name, m] : j.at("maps").items()) {
      const std::string w = where + "maps." + name;
      const Chart src = chart_at(member(m, "source", w), w + ".source");
      const json& comps = member(m, "components", w);
      if (!comps.is_array()) throw InvalidArgument(w + ".components: expected an array");
      std::vector<Expr> c;
      for (std::size_t i = 0; i < comps.size(); ++i) c.push_back(expr_at(comps[i], w + ".components[" + std::to_string(i) + "]"));
      d.maps.emplace(name, SmoothMap(src, d.chart, c));
    }
  }
  return d;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KContactStructure DefinitionFile::structure() const {
  RkOneForm eta;
  if (!eta_names.empty()) {
    for (const auto& n : eta_names) eta.push_back(forms.at(n));
  } else {
    for (const auto& [name, f] : forms) {
      if (f.degree() == 1) eta.push_back(f);
    }
  }
  if (eta.empty()) throw InvalidArgument("definition has no one-forms");
  return KContactStructure(std::move(eta));
}

DefinitionFile parse_definition(std::string_view text) { return definition_at(parse_json(text), ""); }

DefinitionFile load_definition(const std::string& path) { return parse_definition(read_file(path)); }

std::string dump_definition(const Chart& chart, const std::map<std::string, DifferentialForm>& forms,
                            const std::vector<std::string>& eta_names) {
  nlohmann::ordered_json j;
  j["chart"]["coords"] = chart.coordinates();
  std::vector<std::string> constraints;
  for (const auto& c : chart.constraints()) {
    std::ostringstream ss;
    ss << c;
    constraints.push_back(ss.str());
  }
  j["chart"]["constraints"] = constraints;
  for (const auto& [name, r] : chart.ranges()) j["chart"]["ranges"][name] = {r.first.get_str(), r.second.get_str()};
  for (const auto& [name, f] : forms) {
    require_same_chart(f.chart(), chart);
    auto& out = j["forms"][name];
    out["degree"] = f.degree();
    out["coeffs"] = nlohmann::ordered_json::object();
    for (const auto& [idx, c] : f.terms()) {
      std::string key;
      for (std::size_t i = 0; i < idx.size(); ++i) key += (i ? "," : "") + std::to_string(idx[i]);
      std::ostringstream ss;
      ss << c;
      out["coeffs"][key] = ss.str();
    }
  }
  if (!eta_names.empty()) j["eta"] = eta_names;
  return j.dump(2) + "\n";
}

ParametrizingKFunction parse_kfunction(std::string_view text) {
  const json j = parse_json(text);
  ParametrizingKFunction f;
  f.n = int_at(member(j, "n", "k-function"), "n");
  f.k = int_at(member(j, "k", "k-function"), "k");
  const json& I = member(j, "I", "k-function");
  if (!I.is_array()) throw InvalidArgument("I: expected an array");
  for (std::size_t i = 0; i < I.size(); ++i) f.I.push_back(int_at(I[i], "I[" + std::to_string(i) + "]"));
  const json& F = member(j, "F", "k-function");
  if (!F.is_array()) throw InvalidArgument("F: expected an array");
  for (std::size_t a = 0; a < F.size(); ++a) f.F.push_back(expr_at(F[a], "F[" + std::to_string(a) + "]"));
  f.validate();
  return f;
}

ParametrizingKFunction load_kfunction(const std::string& path) { return parse_kfunction(read_file(path)); }

BuiltinStructure resolve_builtin(const std::string& name) {
  auto ints = [&](const std::string& rest) {
    std::vector<int> v;
    std::stringstream ss(rest);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stoi(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw InvalidArgument("bad builtin parameters in " + name);
      }
    }
    return v;
  };
  auto hydro = [&](int k) {
    BuiltinStructure b{name, hydro_structure(k), hydro_polarization(k), {}};
    for (int mu = 0; mu < k; ++mu) b.expected_reeb.push_back(VectorField::coordinate(b.structure.chart(), hydro_S(mu)));
    return b;
  };
  if (name == "hydro4") return hydro(4);
  if (name.rfind("hydro:", 0) == 0) {
    const auto v = ints(name.substr(6));
    if (v.size() != 1) throw InvalidArgument("expected hydro:k");
    return hydro(v[0]);
  }
  if (name.rfind("canonical:", 0) == 0) {
    const auto v = ints(name.substr(10));
    if (v.size() != 2) throw InvalidArgument("expected canonical:n,k");
    const int n = v[0], k = v[1];
    BuiltinStructure b{name, canonical_structure(n, k), {}, {}};
    const Chart& c = b.structure.chart();
    for (int a = 1; a <= k; ++a) {
      b.expected_reeb.push_back(VectorField::coordinate(c, canonical_s(a)));
      for (int i = 1; i <= n; ++i) b.polarization.push_back(VectorField::coordinate(c, canonical_p(a, i)));
    }
    return b;
  }
  if (name == "thermo") {
    BuiltinStructure b{name, thermo_structure(), {}, {}};
    b.expected_reeb.push_back(VectorField::coordinate(b.structure.chart(), "E"));
    return b;
  }
  throw InvalidArgument("unknown builtin structure " + name);
}

KContactStructure SystemFile::structure() const { return builtin ? builtin->structure : definition->structure(); }

SystemFile parse_system(std::string_view text) {
  const json j = parse_json(text);
  SystemFile s;
  const json& st = member(j, "structure", "system");
  if (st.is_string()) {
    s.builtin = resolve_builtin(st.get<std::string>());
  } else {
    s.definition = definition_at(st, "structure.");
  }
  s.hamiltonian = j.contains("H") ? expr_at(j.at("H"), "H") : Expr(0);
  const Chart chart = s.structure().chart();
  for (const auto& v : free_variables(s.hamiltonian)) {
    if (!chart.find(v)) throw InvalidArgument("H: unknown variable " + v);
  }
  return s;
}

SystemFile load_system(const std::string& path) { return parse_system(read_file(path)); }

SmoothMap parse_section(std::string_view text, const Chart& target) {
  const json j = parse_json(text);
  const auto source = names_at(member(j, "source", "section"), "source");
  const json& comps = member(j, "components", "section");
  std::vector<Expr> c;
  for (const auto& name : target.coordinates()) c.push_back(expr_at(member(comps, name, "components"), "components." + name));
  return SmoothMap(Chart(source), target, c);
}

SmoothMap hydro_section(int k, const std::map<std::string, Expr>& fields) {
  const Chart target = hydro_chart(k);
  std::vector<std::string> t;
  for (int mu = 0; mu < k; ++mu) t.push_back(hydro_t(mu));
  for (const auto& [name, e] : fields) {
    if (!target.find(name)) throw InvalidArgument("unknown hydro field " + name);
  }
  std::vector<Expr> c;
  for (const auto& name : target.coordinates()) {
    auto it = fields.find(name);
    c.push_back(it == fields.end() ? Expr(0) : it->second);
  }
  return SmoothMap(Chart(t), target, c);
}

SmoothMap parse_hydro_section(std::string_view text, int* k_out) {
  const json j = parse_json(text);
  const int k = int_at(member(j, "k", "section"), "k");
  std::map<std::string, Expr> fields;
  if (j.contains("fields")) {
    for (const auto& [name, e] : j.at("fields").items()) fields.emplace(name, expr_at(e, "fields." + name));
  }
  if (k_out) *k_out = k;
  return hydro_section(k, fields);
}

}  // namespace kontact
