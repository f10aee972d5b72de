#ifndef KONTACT_IO_HPP
#define KONTACT_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kontact/forms.hpp"
#include "kontact/kcontact.hpp"
#include "kontact/legendrian.hpp"

namespace kontact {

/// Chart, forms and maps read from a definition file:
///   {"chart": {"coords": [...], "constraints": [...], "ranges": {"x": ["a", "b"]}},
///    "forms": {"name": {"degree": p, "coeffs": {"0,2": "expr"}}},
///    "eta": ["name", ...],
///    "maps": {"name": {"source": {"coords": [...]}, "components": ["expr", ...]}}}
/// "eta" names the components of the k-contact form; without it every
/// one-form is used in name order.
struct DefinitionFile {
  Chart chart;
  std::map<std::string, DifferentialForm> forms;
  std::vector<std::string> eta_names;
  std::map<std::string, SmoothMap> maps;

  /// InvalidArgument when no one-form is available.
  KContactStructure structure() const;
};

/// Errors carry the JSON path of the offending entry; malformed JSON and
/// malformed expressions raise ParseError with a 1-based position.
DefinitionFile parse_definition(std::string_view text);
DefinitionFile load_definition(const std::string& path);

/// Writes chart and forms in the same format (coefficients printed exactly).
std::string dump_definition(const Chart& chart, const std::map<std::string, DifferentialForm>& forms, const std::vector<std::string>& eta_names = {});

/// {"n": n, "k": k, "I": [...], "F": ["expr", ...]}
ParametrizingKFunction parse_kfunction(std::string_view text);
ParametrizingKFunction load_kfunction(const std::string& path);

/// A named structure with what is known about it.
struct BuiltinStructure {
  std::string name;
  KContactStructure structure;
  std::vector<VectorField> polarization;  // empty if none registered
  std::vector<VectorField> expected_reeb;
};

/// hydro4, hydro:k, canonical:n,k, thermo. InvalidArgument otherwise.
BuiltinStructure resolve_builtin(const std::string& name);

/// {"structure": "builtin-name" | {definition}, "H": "expr"}
struct SystemFile {
  std::optional<BuiltinStructure> builtin;
  std::optional<DefinitionFile> definition;
  Expr hamiltonian;
  KContactStructure structure() const;
};
SystemFile parse_system(std::string_view text);
SystemFile load_system(const std::string& path);

/// {"source": ["t_1", ...], "components": {"coord": "expr", ...}} into the
/// given chart; every target coordinate must be listed.
SmoothMap parse_section(std::string_view text, const Chart& target);

/// Hydro section: {"k": 4, "fields": {"xi": "t_0", ...}}; fields not listed
/// are zero.
SmoothMap parse_hydro_section(std::string_view text, int* k_out = nullptr);
SmoothMap hydro_section(int k, const std::map<std::string, Expr>& fields);

std::string read_file(const std::string& path);

}  // namespace kontact

#endif  // KONTACT_IO_HPP
