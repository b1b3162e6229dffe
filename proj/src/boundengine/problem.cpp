#include "hodgejet/boundengine/problem.hpp"

#include <filesystem>
#include <fstream>
#include <regex>

#ifndef HODGEJET_DATA_DIR
#define HODGEJET_DATA_DIR "data"
#endif

namespace hodgejet {

namespace {

// Re-raise an InputError from a nested document under `prefix`.
[[noreturn]] void rethrow_under(const InputError& ex, const std::string& prefix) {
  std::string msg = ex.what();
  if (!ex.where().empty() && msg.rfind(ex.where() + ": ", 0) == 0) msg = msg.substr(ex.where().size() + 2);
  throw InputError(msg, prefix + ex.where());
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("HODGEJET_DATA_DIR")) return env;
  return HODGEJET_DATA_DIR;
}

}  // namespace

Catalog builtin_catalog(const std::string& name) {
  if (name == "legendre") return legendre_catalog();
  if (name == "product_legendre") return product_legendre_catalog();
  if (name == "sym3_legendre" || name == "sym3") return sym3_catalog();
  throw InputError("unknown built-in catalog '" + name + "'", "/catalog");
}

std::vector<std::string> builtin_examples() { return {"legendre", "product_legendre", "sym3_legendre"}; }

std::string resolve_problem_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.rfind("builtin:", 0) == 0) return (data_dir() / "examples" / (path.substr(8) + ".json")).string();
  if (fs::exists(path)) return path;
  const fs::path p(path);
  if (p.parent_path() == "examples") {
    const auto bundled = data_dir() / "examples" / p.filename();
    if (fs::exists(bundled)) return bundled.string();
  }
  return path;
}

nlohmann::json Problem::validation_json() const {
  return {{"problem", name},
          {"valid", valid()},
          {"connection", connection_report.to_json()},
          {"catalog", catalog_report.to_json()}};
}

std::vector<Rational> parse_point(const nlohmann::json& js, const Chart& chart, const std::string& where) {
  if (!js.is_object()) throw InputError("point must map each variable to a value", where);
  std::vector<Rational> pt;
  for (const auto& v : chart.symbols->names()) {
    if (!js.contains(v)) throw InputError("missing value for " + v, where);
    const auto& x = js[v];
    pt.push_back(parse_rational(x.is_string() ? x.get<std::string>() : x.dump()));
  }
  return pt;
}

Jet parse_jet_spec(const std::string& text, const Chart& chart, int r, int d) {
  if (r < 0) throw InputError("jet order must be non-negative");
  std::map<std::string, std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw InputError("jet entries look like var=expression: '" + item + "'");
    auto trim = [](std::string x) {
      x.erase(0, x.find_first_not_of(" \t"));
      x.erase(x.find_last_not_of(" \t") + 1);
      return x;
    };
    parts[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    start = end + 1;
  }
  bool indexed = false;
  if (d < 0) {
    d = 1;
    const std::regex tk("\\bt([0-9]+)\\b");
    for (const auto& [v, e] : parts)
      for (auto it = std::sregex_iterator(e.begin(), e.end(), tk); it != std::sregex_iterator(); ++it) {
        indexed = true;
        d = std::max(d, std::stoi((*it)[1]));
      }
  } else {
    indexed = d != 1;
  }
  std::vector<std::string> tn;
  if (!indexed) tn.push_back("t");
  else
    for (int a = 1; a <= d; ++a) tn.push_back("t" + std::to_string(a));
  const Symbols T = make_symbols(tn);
  std::vector<QSeries> coords;
  for (const auto& v : chart.symbols->names()) {
    const auto it = parts.find(v);
    if (it == parts.end()) throw InputError("jet has no entry for variable " + v);
    const MultiPoly f = parse_poly(it->second, T);
    QSeries s(d, r);
    for (const auto& term : f.terms()) {
      MultiIndex alpha(static_cast<std::size_t>(d), 0);
      for (std::size_t a = 0; a < term.mono.size() && a < alpha.size(); ++a) alpha[a] = term.mono[a];
      if (index_weight(alpha) <= r) s.coefficient(alpha) += term.coeff;
    }
    coords.push_back(std::move(s));
    parts.erase(it);
  }
  if (!parts.empty()) throw InputError("jet names unknown variable " + parts.begin()->first);
  return make_jet(chart, d, r, std::move(coords));
}

Problem problem_from_json(const nlohmann::json& js, const std::string& source) {
  if (!js.is_object()) throw InputError("problem file must be a JSON object", "");
  if (js.contains("schema") && js["schema"] != 1) throw InputError("unsupported schema version", "/schema");
  Problem pb;
  pb.source = source;
  pb.name = js.value("name", std::filesystem::path(source).stem().string());
  if (!js.contains("connection")) throw InputError("missing connection", "/connection");
  try {
    pb.conn = connection_from_json(js["connection"]);
  } catch (const InputError& ex) {
    rethrow_under(ex, "/connection");
  }

  if (!js.contains("catalog")) throw InputError("missing catalog", "/catalog");
  const auto& cj = js["catalog"];
  if (cj.is_string()) {
    pb.catalog_ref = cj.get<std::string>();
    if (pb.catalog_ref.rfind("builtin:", 0) != 0) throw InputError("catalog reference must be builtin:NAME", "/catalog");
    pb.catalog = builtin_catalog(pb.catalog_ref.substr(8));
  } else {
    pb.catalog_ref = "inline";
    FlagShape shape = pb.conn.shape;
    if (cj.contains("m") || cj.contains("filtration")) {
      shape = parse_shape(cj.value("filtration", nlohmann::json::array()), cj.value("m", 0));
    }
    pb.catalog = catalog_from_json(cj, shape);
  }
  if (!(pb.catalog.shape == pb.conn.shape))
    throw ShapeError("catalog shape " + pb.catalog.shape.to_string() + " does not match the filtration " +
                     pb.conn.shape.to_string());

  if (js.contains("candidates")) {
    if (!js["candidates"].is_array()) throw InputError("candidates must be a list", "/candidates");
    for (std::size_t i = 0; i < js["candidates"].size(); ++i) {
      const std::string w = "/candidates/" + std::to_string(i);
      auto z = candidate_from_json(js["candidates"][i], pb.conn, w);
      if (!z.type.empty()) {
        try {
          pb.catalog.find(z.type);
        } catch (const Error&) {
          throw InputError("type '" + z.type + "' is not in the catalog", w + "/type");
        }
      }
      pb.candidates.push_back(std::move(z));
    }
  }
  if (js.contains("run")) {
    const auto& r = js["run"];
    pb.d = r.value("d", 0);
    pb.rmax = r.value("rmax", 3);
    if (r.contains("budget_ms")) pb.budget_ms = r["budget_ms"].get<long>();
    if (r.contains("E")) pb.E = r["E"].get<int>();
    if (pb.d < 0 || pb.rmax < 0) throw InputError("d and rmax must be non-negative", "/run");
  }
  if (js.contains("padic")) {
    const auto& p = js["padic"];
    PadicParams pp;
    pp.p = p.value("p", 0L);
    pp.r = p.value("r", 4);
    pp.precision = p.value("precision", 20);
    if (p.contains("s0")) pp.s0 = parse_point(p["s0"], pb.conn.chart, "/padic/s0");
    pb.padic = pp;
  }
  if (js.contains("expected"))
    for (const auto& [k, v] : js["expected"].items()) pb.expected[std::stoi(k)] = v.get<std::string>();

  pb.connection_report = validate_connection(pb.conn);
  pb.catalog_report = catalog_validate(pb.catalog);
  if (!pb.valid()) {
    std::string msg = "validation failed:";
    for (const auto& f : pb.connection_report.failures) msg += " [connection] " + f + ";";
    for (const auto& f : pb.catalog_report.failures) msg += " [catalog] " + f + ";";
    throw InputError(msg);
  }
  return pb;
}

Problem load_problem(const std::string& path) {
  const std::string resolved = resolve_problem_path(path);
  std::ifstream in(resolved);
  if (!in) throw InputError("cannot open problem file " + path);
  nlohmann::json js;
  try {
    js = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw InputError(std::string("malformed JSON: ") + ex.what());
  }
  return problem_from_json(js, resolved);
}

}  // namespace hodgejet
