#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgejet/boundengine/engine.hpp"

namespace hodgejet {

struct PadicParams {
  long p = 0;
  std::vector<Rational> s0;
  int r = 0;
  int precision = 20;
};

/// A fully loaded and validated problem file.
struct Problem {
  std::string name;
  std::string source;
  ConnectionData conn;
  std::string catalog_ref;
  Catalog catalog;
  std::vector<CandidateSubvariety> candidates;
  int d = 0;
  int rmax = 3;
  std::optional<long> budget_ms;
  std::optional<int> E;
  std::optional<PadicParams> padic;
  /// Expected summary line per d.
  std::map<int, std::string> expected;
  ConnectionReport connection_report;
  CatalogReport catalog_report;

  bool valid() const { return connection_report.valid() && catalog_report.ok; }
  nlohmann::json validation_json() const;
};

/// Built-in catalogs by name: legendre, product_legendre, sym3_legendre.
Catalog builtin_catalog(const std::string& name);
std::vector<std::string> builtin_examples();

/// "builtin:NAME" and "examples/NAME.json" resolve to the bundled fixtures
/// when no such file exists relative to the working directory.
std::string resolve_problem_path(const std::string& path);

/// Parses and validates. Throws InputError (with a JSON pointer) on schema
/// errors, ShapeError when the catalog and filtration disagree, and
/// InputError listing the failures when validation does not pass.
Problem problem_from_json(const nlohmann::json& js, const std::string& source = "");
Problem load_problem(const std::string& path);

/// Rational point of the chart from {"var": "value"}.
std::vector<Rational> parse_point(const nlohmann::json& js, const Chart& chart, const std::string& where = "");

/// Jet from "x=2+t, y=t^2" style text: each chart variable as a polynomial
/// in the disk variables (t for one variable, t1..td otherwise), truncated at
/// order r. d = -1 infers the number of disk variables from the text.
Jet parse_jet_spec(const std::string& text, const Chart& chart, int r, int d = -1);

}  // namespace hodgejet
