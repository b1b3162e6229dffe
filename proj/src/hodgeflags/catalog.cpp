#include "hodgejet/hodgeflags/catalog.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace hodgejet {

namespace {

std::vector<std::size_t> iota_n(int n) {
  std::vector<std::size_t> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  return v;
}

QMatrix matrix_from_json(const nlohmann::json& js, int m, const std::string& where) {
  if (!js.is_array() || static_cast<int>(js.size()) != m) throw InputError("Lie generator must be m x m", where);
  QMatrix x(static_cast<std::size_t>(m), static_cast<std::size_t>(m), Rational(0));
  for (int i = 0; i < m; ++i) {
    const auto& row = js[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != m) throw InputError("Lie generator must be m x m", where);
    for (int j = 0; j < m; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      x(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
    }
  }
  return x;
}

// Polynomial h(y_b) with every chart-b coordinate replaced by num/det of its
// step, multiplied through by the needed powers of the step determinants.
MultiPoly clear_chart_substitution(const MultiPoly& h, const FlagChart& chart,
                                   const std::vector<std::vector<MultiPoly>>& nums,
                                   const std::vector<MultiPoly>& dets, const Symbols& target) {
  const int w = chart.shape.steps();
  std::vector<int> top_power(static_cast<std::size_t>(w), 0);
  std::vector<std::vector<int>> term_powers;
  for (const auto& t : h.terms()) {
    std::vector<int> e(static_cast<std::size_t>(w), 0);
    for (std::size_t v = 0; v < t.mono.size(); ++v)
      e[static_cast<std::size_t>(chart.shape.block_of(chart.cells[v].second))] += t.mono[v];
    for (int k = 0; k < w; ++k)
      top_power[static_cast<std::size_t>(k)] = std::max(top_power[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)]);
    term_powers.push_back(e);
  }
  MultiPoly out(target);
  for (std::size_t i = 0; i < h.terms().size(); ++i) {
    const Term& t = h.terms()[i];
    MultiPoly term(target, t.coeff);
    for (std::size_t v = 0; v < t.mono.size(); ++v)
      if (t.mono[v]) {
        const int k = chart.shape.block_of(chart.cells[v].second);
        term *= nums[static_cast<std::size_t>(k)][v].pow(t.mono[v]);
      }
    for (int k = 0; k < w; ++k)
      term *= dets[static_cast<std::size_t>(k)].pow(
          static_cast<unsigned>(top_power[static_cast<std::size_t>(k)] - term_powers[i][static_cast<std::size_t>(k)]));
    out += term;
  }
  return out;
}

// Numerators (per step, per chart coordinate) and step determinants of the
// chart coordinates of the flag spanned by the columns of `basis`.
void chart_fractions(const FlagChart& chart, const Matrix<MultiPoly>& basis, const Symbols& target,
                     std::vector<std::vector<MultiPoly>>& nums, std::vector<MultiPoly>& dets) {
  const MultiPoly zero(target), one(target, Rational(1));
  nums.assign(static_cast<std::size_t>(chart.shape.steps()), {});
  dets.clear();
  for (int k = 0; k < chart.shape.steps(); ++k) {
    const int ik = chart.shape.dims[static_cast<std::size_t>(k)];
    const auto cols = iota_n(ik);
    const Matrix<MultiPoly> bk = basis.select(iota_n(chart.shape.m), cols);
    const Matrix<MultiPoly> sq = bk.select(chart.pivot_rows(k), iota_n(ik));
    dets.push_back(determinant_expand(sq, zero));
    const Matrix<MultiPoly> n = bk * adjugate(sq, zero, one);
    for (const auto& [r, c] : chart.cells)
      nums[static_cast<std::size_t>(k)].push_back(
          chart.shape.block_of(c) == k ? n(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) : zero);
  }
}

// Coefficients, as polynomials in the trailing variables, of the normal form
// of f modulo a basis in the leading `nlead` variables.
std::vector<MultiPoly> coefficient_split(const MultiPoly& nf, std::size_t nlead, const Symbols& table) {
  std::map<Monomial, std::vector<Term>> groups;
  for (const auto& t : nf.terms()) {
    Monomial lead(t.mono.begin(), t.mono.begin() + static_cast<std::ptrdiff_t>(std::min(nlead, t.mono.size())));
    Monomial rest = t.mono;
    for (std::size_t v = 0; v < nlead && v < rest.size(); ++v) rest[v] = 0;
    groups[lead].push_back({rest, t.coeff});
  }
  std::vector<MultiPoly> out;
  for (auto& [lead, terms] : groups) out.push_back(MultiPoly::from_terms(table, terms));
  return out;
}

}  // namespace

std::optional<std::size_t> TypeRep::find_chart(const Pivots& p) const {
  const Pivots canon = flag_chart(shape, p).pivots;
  for (std::size_t i = 0; i < charts.size(); ++i)
    if (flag_chart(shape, charts[i].pivots).pivots == canon) return i;
  return std::nullopt;
}

const TypeRep& Catalog::find(const std::string& name) const {
  for (const auto& t : types)
    if (t.name == name) return t;
  throw InputError("unknown type '" + name + "'");
}

nlohmann::json type_to_json(const TypeRep& t) {
  nlohmann::json js;
  js["name"] = t.name;
  js["shape"] = t.shape.dims;
  js["dim"] = t.dim;
  js["charts"] = nlohmann::json::array();
  for (const auto& c : t.charts)
    js["charts"].push_back({{"pivots", pivots_to_json(c.pivots)},
                            {"ideal", nlohmann::json::parse(serialize_basis(c.ideal.generators()))}});
  js["lie_generators"] = nlohmann::json::array();
  for (const auto& x : t.lie_generators) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < x.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < x.cols(); ++c) row.push_back(to_string(x(r, c)));
      rows.push_back(row);
    }
    js["lie_generators"].push_back(rows);
  }
  js["hodge_theoretic"] = t.hodge_theoretic;
  js["homogeneous"] = t.homogeneous;
  js["leq"] = t.leq;
  return js;
}

TypeRep type_from_json(const nlohmann::json& js, const FlagShape& shape, const std::string& where) {
  if (!js.is_object()) throw InputError("type entry must be an object", where);
  TypeRep t;
  t.shape = shape;
  if (!js.contains("name") || !js["name"].is_string()) throw InputError("type entry needs a name", where);
  t.name = js["name"].get<std::string>();
  if (js.contains("shape")) {
    const FlagShape s = parse_shape(js["shape"], shape.m);
    if (!(s == shape))
      throw ShapeError(where + ": type '" + t.name + "' has shape " + s.to_string() + " but the problem has " +
                       shape.to_string());
  }
  if (!js.contains("dim") || !js["dim"].is_number_integer()) throw InputError("type entry needs an integer dim", where);
  t.dim = js["dim"].get<int>();
  for (std::size_t i = 0; i < js.value("charts", nlohmann::json::array()).size(); ++i) {
    const auto& c = js["charts"][i];
    const std::string cw = where + "/charts/" + std::to_string(i);
    FlagChart ch = flag_chart(shape, parse_pivots(c.at("pivots"), shape));
    std::vector<MultiPoly> gens;
    for (const auto& g : c.value("ideal", nlohmann::json::array())) {
      try {
        gens.push_back(parse_poly(g.get<std::string>(), ch.symbols));
      } catch (const InputError& e) {
        throw InputError(e.what(), cw + "/ideal");
      }
    }
    t.charts.push_back({ch.pivots, Ideal(ch.symbols, gens)});
  }
  for (std::size_t i = 0; i < js.value("lie_generators", nlohmann::json::array()).size(); ++i)
    t.lie_generators.push_back(
        matrix_from_json(js["lie_generators"][i], shape.m, where + "/lie_generators/" + std::to_string(i)));
  t.hodge_theoretic = js.value("hodge_theoretic", false);
  t.homogeneous = js.value("homogeneous", false);
  for (const auto& n : js.value("leq", nlohmann::json::array())) t.leq.push_back(n.get<std::string>());
  return t;
}

nlohmann::json catalog_to_json(const Catalog& c) {
  nlohmann::json js;
  js["completeness"] = c.completeness;
  js["types"] = nlohmann::json::array();
  for (const auto& t : c.types) js["types"].push_back(type_to_json(t));
  return js;
}

Catalog catalog_from_json(const nlohmann::json& js, const FlagShape& shape) {
  Catalog c;
  c.shape = shape;
  if (!js.is_object()) throw InputError("catalog must be an object", "/catalog");
  c.completeness = js.value("completeness", std::string());
  const auto types = js.value("types", nlohmann::json::array());
  for (std::size_t i = 0; i < types.size(); ++i)
    c.types.push_back(type_from_json(types[i], shape, "/catalog/types/" + std::to_string(i)));
  return c;
}

std::optional<bool> type_contains(const TypeRep& t, const FlagPoint& F) {
  for (std::size_t i = 0; i < t.charts.size(); ++i) {
    const FlagChart ch = t.chart(i);
    if (!ch.contains(F.basis)) continue;
    const auto y = ch.coordinates(F.basis);
    const Ideal I = t.charts[i].ideal.rebased(ch.symbols);
    for (const auto& g : I.generators())
      if (g.evaluate(y) != 0) return false;
    return true;
  }
  return std::nullopt;
}

namespace {

struct Translated {
  Ideal eqs;
  std::vector<Ideal> families;
  bool complete = true;
};

// Conditions on the translate M = g.B(y) of W1 (chart a, reduced modulo the
// basis of its ideal) to land in W2's chart b: every cleared W2 generator
// reduces to zero, and each step determinant is not identically zero.
Translated translate_into(const TypeRep& w2, std::size_t cb, const Matrix<MultiPoly>& M,
                          const std::vector<MultiPoly>& i1_basis, const MonomialOrder& order, std::size_t ny,
                          const Symbols& table, int max_degree) {
  const FlagChart chart_b = w2.chart(cb);
  std::vector<std::vector<MultiPoly>> nums;
  std::vector<MultiPoly> dets;
  chart_fractions(chart_b, M, table, nums, dets);
  Translated sys{Ideal(table), {}};
  const Ideal w2i = w2.charts[cb].ideal.rebased(chart_b.symbols);
  for (const auto& h : w2i.generators()) {
    if (static_cast<int>(h.total_degree()) * chart_b.shape.m > max_degree) {
      sys.complete = false;
      return sys;
    }
    const MultiPoly cleared = clear_chart_substitution(h, chart_b, nums, dets, table);
    for (auto& c : coefficient_split(normal_form(cleared, i1_basis, order), ny, table)) sys.eqs.add(c);
  }
  for (const auto& dk : dets)
    sys.families.push_back(Ideal(table, coefficient_split(normal_form(dk, i1_basis, order), ny, table)));
  return sys;
}

bool identically_satisfied(const Translated& sys) {
  for (const auto& e : sys.eqs.generators())
    if (!e.is_zero()) return false;
  for (const auto& fam : sys.families)
    if (std::none_of(fam.generators().begin(), fam.generators().end(), [](const MultiPoly& f) { return !f.is_zero(); }))
      return false;
  return true;
}

// Permutation matrices and a few seeded products of unipotent matrices.
std::vector<QMatrix> witness_candidates(int m) {
  const auto n = static_cast<std::size_t>(m);
  std::vector<QMatrix> out;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  do {
    QMatrix pm(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) pm(perm[i], i) = Rational(1);
    out.push_back(pm);
  } while (m <= 5 && std::next_permutation(perm.begin(), perm.end()));
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return Rational(static_cast<long>((state >> 33) % 5) - 2);
  };
  for (int t = 0; t < 8; ++t) {
    QMatrix lower = identity_q(n), upper = identity_q(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        lower(i, j) = next();
        upper(j, i) = next();
      }
    out.push_back(lower * upper);
  }
  return out;
}

}  // namespace

Tri type_leq(const TypeRep& w1, const TypeRep& w2, const Budget& budget) {
  if (!(w1.shape == w2.shape)) throw ShapeError("type_leq needs equal flag shapes");
  if (w1.dim > w2.dim) return Tri::False;
  const int m = w1.shape.m;
  const auto n = static_cast<std::size_t>(m);

  // A chart where W1 is nonempty; prefer one realizing the declared dimension.
  std::optional<std::size_t> a;
  for (std::size_t i = 0; i < w1.charts.size(); ++i) {
    if (w1.charts[i].ideal.has_unit_generator()) continue;
    if (!a) a = i;
    try {
      if (ideal_dimension(w1.charts[i].ideal, budget) == w1.dim) {
        a = i;
        break;
      }
    } catch (const BudgetExceeded&) {
    }
  }
  if (!a) return Tri::Unknown;
  const FlagChart ca = w1.chart(*a);
  std::vector<std::size_t> w2_charts;
  for (std::size_t cb = 0; cb < w2.charts.size(); ++cb)
    if (!w2.charts[cb].ideal.has_unit_generator()) w2_charts.push_back(cb);

  // Exact witnesses first, with g fixed: everything stays in the y variables.
  {
    const Symbols ys = ca.symbols;
    std::vector<MultiPoly> basis_y;
    try {
      basis_y = groebner(w1.charts[*a].ideal, MonomialOrder::grevlex(), budget);
    } catch (const BudgetExceeded&) {
    }
    if (!basis_y.empty() || w1.charts[*a].ideal.generators().empty()) {
      const Matrix<MultiPoly> b = ca.basis_matrix();
      for (const QMatrix& cand : witness_candidates(m)) {
        const Matrix<MultiPoly> M =
            cand.map([&](const Rational& v) { return MultiPoly(ys, v); }) * b;
        for (std::size_t cb : w2_charts) {
          const Translated sys =
              translate_into(w2, cb, M, basis_y, MonomialOrder::grevlex(), ys->size(), ys, budget.max_degree);
          if (sys.complete && identically_satisfied(sys)) return Tri::True;
        }
      }
    }
  }

  std::vector<std::string> names = ca.symbols->names();
  const std::size_t ny = names.size();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) names.push_back("g[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]");
  names.push_back("u");
  const Symbols table = make_symbols(names);
  const MonomialOrder order = MonomialOrder::elimination(ny);

  std::vector<MultiPoly> i1_basis;
  try {
    i1_basis = groebner(w1.charts[*a].ideal.rebased(table), order, budget);
  } catch (const BudgetExceeded&) {
    return Tri::Unknown;
  }

  Matrix<MultiPoly> g(n, n, MultiPoly(table));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = MultiPoly::variable(table, ny + i * n + j);
  const MultiPoly det_g = determinant_expand(g, MultiPoly(table));
  const Matrix<MultiPoly> gb = g * ca.basis_matrix().map([&](const MultiPoly& p) { return p.rebased(table); });

  // The symbolic translate grows quickly with the W2 degree; beyond a
  // small degree the question is left undecided.
  bool unknown = false;
  for (std::size_t cb : w2_charts) {
    Translated sys = translate_into(w2, cb, gb, i1_basis, order, ny, table, 8);
    if (!sys.complete) {
      unknown = true;
      continue;
    }
    sys.eqs.add(MultiPoly::variable(table, names.size() - 1) * det_g - MultiPoly(table, Rational(1)));
    const Tri t = check_consistent_families(sys.eqs, sys.families, budget).consistent;
    if (t == Tri::True) return Tri::True;
    if (t == Tri::Unknown) unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::False;
}

nlohmann::json CatalogReport::to_json() const {
  return {{"ok", ok}, {"failures", failures}, {"warnings", warnings}};
}

CatalogReport catalog_validate(const Catalog& c, const Budget& budget) {
  CatalogReport rep;
  auto fail = [&](std::string s) {
    rep.ok = false;
    rep.failures.push_back(std::move(s));
  };
  if (c.types.empty()) rep.warnings.push_back("catalog is empty; completeness cannot hold");
  if (c.completeness.empty()) rep.warnings.push_back("no completeness attestation given");
  std::set<std::string> names;
  for (const auto& t : c.types)
    if (!names.insert(t.name).second) fail("duplicate type name '" + t.name + "'");

  const FlagPoint base = standard_flag(c.shape);
  for (const auto& t : c.types) {
    const std::string tag = "type '" + t.name + "': ";
    if (!(t.shape == c.shape)) {
      fail(tag + "shape differs from the catalog shape");
      continue;
    }
    int best = -1;
    bool dim_unknown = false;
    for (const auto& ch : t.charts) {
      try {
        best = std::max(best, ideal_dimension(ch.ideal, budget));
      } catch (const BudgetExceeded&) {
        dim_unknown = true;
      }
    }
    if (t.charts.empty()) fail(tag + "no chart ideals");
    else if (best != t.dim && !dim_unknown)
      fail(tag + "declared dim " + std::to_string(t.dim) + " but chart ideals have dimension " + std::to_string(best));
    else if (best != t.dim)
      rep.warnings.push_back(tag + "dimension check exhausted its budget");

    const auto has_base = type_contains(t, base);
    if (!t.lie_generators.empty() || t.homogeneous) {
      const int od = orbit_dimension(t.lie_generators, base);
      if (!has_base.value_or(false)) {
        fail(tag + "standard flag is not on the representative");
      } else if (od != t.dim) {
        fail(tag + "orbit dimension " + std::to_string(od) + " at the standard flag differs from dim " +
             std::to_string(t.dim));
      }
    }
    for (const auto& other : t.leq) {
      if (!names.count(other)) {
        fail(tag + "order relation names unknown type '" + other + "'");
        continue;
      }
      const Tri r = type_leq(t, c.find(other), budget);
      if (r == Tri::False) fail(tag + "declared <= '" + other + "' but no translate is contained");
      if (r == Tri::Unknown) rep.warnings.push_back(tag + "order relation with '" + other + "' undecided within budget");
    }
  }
  return rep;
}

std::vector<ChartIdeal> chart_ideals_from_parametrization(const FlagShape& shape, const Matrix<MultiPoly>& basis,
                                                          const Budget& budget) {
  std::vector<ChartIdeal> out;
  const Symbols params = basis.data().empty() ? make_symbols({}) : basis(0, 0).symbols();
  for (const FlagChart& chart : flag_atlas(shape)) {
    std::vector<std::string> names = params ? params->names() : std::vector<std::string>{};
    std::vector<std::string> zs;
    for (int k = 0; k < shape.steps(); ++k) zs.push_back("z" + std::to_string(k));
    Symbols with_z = extend_symbols(params, zs, &zs);
    std::vector<std::string> ys;
    Symbols table = extend_symbols(with_z, chart.symbols->names(), &ys);
    const Matrix<MultiPoly> b = basis.map([&](const MultiPoly& p) {
      return p.symbols() ? p.rebased(table) : MultiPoly(table, p.constant_term());
    });
    std::vector<std::vector<MultiPoly>> nums;
    std::vector<MultiPoly> dets;
    chart_fractions(chart, b, table, nums, dets);
    Ideal graph(table);
    for (int k = 0; k < shape.steps(); ++k)
      graph.add(MultiPoly::variable(table, zs[static_cast<std::size_t>(k)]) * dets[static_cast<std::size_t>(k)] -
                MultiPoly(table, Rational(1)));
    for (std::size_t v = 0; v < chart.cells.size(); ++v) {
      const auto k = static_cast<std::size_t>(chart.shape.block_of(chart.cells[v].second));
      graph.add(MultiPoly::variable(table, ys[v]) * dets[k] - nums[k][v]);
    }
    const Ideal img = eliminate(graph, ys, budget);
    if (img.has_unit_generator()) continue;
    const Ideal on_chart = img.rebased(chart.symbols);
    out.push_back({chart.pivots, Ideal(chart.symbols, groebner(on_chart, MonomialOrder::grevlex(), budget))});
  }
  return out;
}

namespace {

TypeRep param_type(const std::string& name, const FlagShape& shape, int dim, const Matrix<MultiPoly>& basis,
                   std::vector<QMatrix> lie, std::vector<std::string> leq) {
  TypeRep t;
  t.name = name;
  t.shape = shape;
  t.dim = dim;
  t.charts = chart_ideals_from_parametrization(shape, basis, Budget());
  t.lie_generators = std::move(lie);
  t.hodge_theoretic = true;
  t.homogeneous = true;
  t.leq = std::move(leq);
  return t;
}

Matrix<MultiPoly> columns(const Symbols& s, const std::vector<std::vector<std::string>>& cols) {
  const std::size_t m = cols[0].size();
  Matrix<MultiPoly> b(m, cols.size(), MultiPoly(s));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < m; ++r) b(r, c) = parse_poly(cols[c][r], s);
  return b;
}

std::vector<QMatrix> on_block(const std::vector<int>& idx, int m) {
  std::vector<QMatrix> out;
  for (const auto& x : sl2_basis()) out.push_back(embed_block(x, m, idx));
  return out;
}

}  // namespace

Catalog legendre_catalog() {
  static std::once_flag once;
  static Catalog cat;
  std::call_once(once, [] {
    const FlagShape shape{2, {1}};
    auto s = make_symbols({"s"});
    cat.shape = shape;
    cat.completeness =
        "Hodge-theoretic types for weight-one rank-two variations: the base point and the full period domain";
    cat.types.push_back(param_type("point", shape, 0, columns(s, {{"1", "0"}}), {}, {"P1"}));
    cat.types.push_back(param_type("P1", shape, 1, columns(s, {{"1", "s"}}), sl2_basis(), {}));
  });
  return cat;
}

Catalog product_legendre_catalog() {
  static std::once_flag once;
  static Catalog cat;
  std::call_once(once, [] {
    // Frame order: F-vectors of both factors first, then their complements.
    const FlagShape shape{4, {2}};
    auto s = make_symbols({"a", "b"});
    cat.shape = shape;
    cat.completeness =
        "Sub-orbits of the product period domain P1 x P1 in Gr(2,4) for SL2 x SL2 monodromy";
    std::vector<QMatrix> both = on_block({0, 2}, 4);
    for (const auto& x : on_block({1, 3}, 4)) both.push_back(x);
    std::vector<QMatrix> diag;
    for (const auto& x : sl2_basis()) diag.push_back(embed_block(x, 4, {0, 2}) + embed_block(x, 4, {1, 3}));
    cat.types.push_back(param_type("point", shape, 0, columns(s, {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}}), {},
                                   {"h-line", "v-line", "diagonal", "P1xP1"}));
    cat.types.push_back(param_type("h-line", shape, 1, columns(s, {{"1", "0", "0", "0"}, {"0", "1", "0", "b"}}),
                                   on_block({1, 3}, 4), {"P1xP1"}));
    cat.types.push_back(param_type("v-line", shape, 1, columns(s, {{"1", "0", "a", "0"}, {"0", "1", "0", "0"}}),
                                   on_block({0, 2}, 4), {"P1xP1"}));
    cat.types.push_back(param_type("diagonal", shape, 1, columns(s, {{"1", "0", "a", "0"}, {"0", "1", "0", "a"}}),
                                   diag, {"P1xP1"}));
    cat.types.push_back(param_type("P1xP1", shape, 2, columns(s, {{"1", "0", "a", "0"}, {"0", "1", "0", "b"}}),
                                   both, {}));
  });
  return cat;
}

Catalog sym3_catalog() {
  static std::once_flag once;
  static Catalog cat;
  std::call_once(once, [] {
    const FlagShape shape{4, {1, 2, 3}};
    auto s = make_symbols({"s"});
    cat.shape = shape;
    cat.completeness = "Orbits of SL2 acting through Sym^3 on full flags: the base flag and the osculating curve";
    std::vector<QMatrix> lie;
    for (const auto& x : sl2_basis()) lie.push_back(sym3_matrix(x));
    // Osculating flag of the twisted cubic (w1 + s w2)^3.
    cat.types.push_back(param_type(
        "point", shape, 0, columns(s, {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}}), {},
        {"osculating-curve"}));
    cat.types.push_back(param_type(
        "osculating-curve", shape, 1,
        columns(s, {{"1", "3*s", "3*s^2", "s^3"}, {"0", "3", "6*s", "3*s^2"}, {"0", "0", "6", "6*s"}}), lie, {}));
  });
  return cat;
}

}  // namespace hodgejet
