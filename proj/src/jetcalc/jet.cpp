#include "hodgejet/jetcalc/jet.hpp"

#include <algorithm>

namespace hodgejet {

namespace {

const std::function<Rational(const Rational&)> kIdentity = [](const Rational& q) { return q; };

std::vector<QSeries> unit_inverses(const Jet& j, const UnitList& units, const std::vector<int>& powers) {
  std::vector<QSeries> inv;
  for (std::size_t u = 0; u < powers.size(); ++u) {
    if (!powers[u]) {
      inv.emplace_back();
      continue;
    }
    QSeries s = series_compose((*units)[u], j);
    if (s.constant_term() == 0)
      throw PoleError("jet based at a pole of " + (*units)[u].to_string());
    inv.push_back(series_inverse(s));
  }
  return inv;
}

}  // namespace

std::vector<Rational> Jet::base_point() const {
  std::vector<Rational> p;
  for (const auto& c : coords) p.push_back(c.constant_term());
  return p;
}

bool Jet::base_is_valid() const {
  const auto p = base_point();
  const Ideal rel = chart.relations.rebased(chart.symbols);
  for (const auto& g : rel.generators())
    if (g.evaluate(p) != 0) return false;
  for (const auto& u : chart.units)
    if (u.evaluate(p) == 0) return false;
  return true;
}

Jet make_jet(const Chart& chart, int d, int r, std::vector<QSeries> coords) {
  const std::size_t n = chart.symbols ? chart.symbols->size() : 0;
  if (coords.size() != n) throw ShapeError("jet needs one series per chart variable");
  for (const auto& c : coords)
    if (c.d() != d || c.r() != r) throw ShapeError("jet series shape mismatch");
  return Jet{chart, d, r, std::move(coords)};
}

QSeries series_compose(const MultiPoly& f, const Jet& j) {
  const MultiPoly g = f.symbols() && !same_symbols(f.symbols(), j.chart.symbols)
                          ? f.rebased(j.chart.symbols)
                          : f;
  return compose_poly<Rational>(g, j.coords, kIdentity, j.d, j.r, Rational(0));
}

QSeries series_inverse(const QSeries& s) {
  if (s.constant_term() == 0) throw PoleError("series with zero constant term is not invertible");
  return s.inverse_given(Rational(1) / s.constant_term(), Rational(1));
}

QSeries series_compose(const ChartFraction& f, const Jet& j) {
  QSeries out = series_compose(f.numerator(), j);
  if (f.is_polynomial()) return out;
  const auto inv = unit_inverses(j, f.units(), f.powers());
  for (std::size_t u = 0; u < inv.size(); ++u)
    for (int k = 0; k < f.powers()[u]; ++k) out = out * inv[u];
  return out;
}

std::string jet_variable_name(const std::string& base, const MultiIndex& alpha) {
  return base + "[" + index_string(alpha) + "]";
}

std::size_t JetChartSpace::variable(std::size_t base_var, const MultiIndex& alpha) const {
  const auto alg = DiskAlgebra::get(d, r);
  const std::size_t p = alg->position(alpha);
  if (p == static_cast<std::size_t>(-1)) throw ShapeError("multi-index beyond jet order");
  return base_var * alg->size() + p;
}

std::vector<PolySeries> JetChartSpace::generic_series() const {
  const auto alg = DiskAlgebra::get(d, r);
  const std::size_t n = base.symbols ? base.symbols->size() : 0;
  std::vector<PolySeries> out;
  for (std::size_t i = 0; i < n; ++i) {
    PolySeries s(d, r, MultiPoly(symbols));
    for (std::size_t a = 0; a < alg->size(); ++a) s[a] = MultiPoly::variable(symbols, i * alg->size() + a);
    out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json JetChartSpace::to_json() const {
  nlohmann::json js;
  js["d"] = d;
  js["r"] = r;
  js["symbols"] = symbols->names();
  js["ideal"] = nlohmann::json::parse(serialize_basis(ideal.generators()));
  js["units"] = nlohmann::json::parse(serialize_basis(units));
  return js;
}

JetChartSpace prolong_ideal(const Chart& base, int d, int r) {
  if (d < 0 || r < 0) throw InputError("jet parameters must be non-negative");
  JetChartSpace sp;
  sp.base = base;
  sp.d = d;
  sp.r = r;
  const auto alg = DiskAlgebra::get(d, r);
  std::vector<std::string> names;
  for (const auto& v : base.symbols->names())
    for (const auto& a : alg->basis) names.push_back(jet_variable_name(v, a));
  sp.symbols = make_symbols(names);

  const auto series = sp.generic_series();
  const std::function<MultiPoly(const Rational&)> lift = [&](const Rational& q) {
    return MultiPoly(sp.symbols, q);
  };
  const MultiPoly zero(sp.symbols);
  std::vector<MultiPoly> gens;
  const Ideal relations = base.relations.rebased(base.symbols);
  for (const auto& g : relations.generators()) {
    const PolySeries s = compose_poly<MultiPoly>(g, series, lift, d, r, zero);
    for (std::size_t a = 0; a < s.size(); ++a) gens.push_back(s[a]);
  }
  sp.ideal = Ideal(sp.symbols, std::move(gens));

  std::vector<MultiPoly> order0;
  for (std::size_t i = 0; i < base.symbols->size(); ++i)
    order0.push_back(MultiPoly::variable(sp.symbols, i * alg->size()));
  for (const auto& u : base.units) sp.units.push_back(u.rebased(base.symbols).substitute(order0, sp.symbols));
  return sp;
}

Jet restrict_jet(const Jet& j, int e) {
  if (e < 0 || e > j.d) throw InputError("restriction dimension out of range");
  Jet out{j.chart, e, j.r, {}};
  for (const auto& c : j.coords) out.coords.push_back(c.restrict_to(e, j.r));
  return out;
}

Jet truncate_jet(const Jet& j, int r) {
  if (r < 0 || r > j.r) throw InputError("truncation order out of range");
  Jet out{j.chart, j.d, r, {}};
  for (const auto& c : j.coords) out.coords.push_back(c.restrict_to(j.d, r));
  return out;
}

Ideal nondegeneracy_stratum(const JetChartSpace& space, int e) {
  if (space.r < 1) throw InputError("non-degeneracy needs jets of order at least 1");
  if (e < 1 || e > space.d) throw InputError("non-degeneracy dimension out of range");
  const std::size_t n = space.base.symbols->size();
  Matrix<MultiPoly> lin(n, static_cast<std::size_t>(e), MultiPoly(space.symbols));
  const auto alg = DiskAlgebra::get(space.d, space.r);
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < e; ++a)
      lin(i, static_cast<std::size_t>(a)) =
          MultiPoly::variable(space.symbols, i * alg->size() + alg->unit_index(a));
  std::vector<MultiPoly> minors;
  if (n >= static_cast<std::size_t>(e)) {
    std::vector<std::size_t> cols(static_cast<std::size_t>(e));
    for (int a = 0; a < e; ++a) cols[static_cast<std::size_t>(a)] = static_cast<std::size_t>(a);
    for (const auto& rows : combinations(n, static_cast<std::size_t>(e)))
      minors.push_back(determinant_expand(lin.select(rows, cols), MultiPoly(space.symbols)));
  }
  return Ideal(space.symbols, std::move(minors));
}

bool is_jet_on_variety(const Jet& j, const Ideal& I) {
  for (const auto& g : I.generators()) {
    const QSeries s = series_compose(g, j);
    for (std::size_t a = 0; a < s.size(); ++a)
      if (s[a] != 0) return false;
  }
  return true;
}

nlohmann::json jet_to_json(const Jet& j) {
  nlohmann::json js = nlohmann::json::object();
  for (std::size_t i = 0; i < j.coords.size(); ++i) {
    nlohmann::json c = nlohmann::json::object();
    const auto& s = j.coords[i];
    for (std::size_t a = 0; a < s.size(); ++a) c[index_string(s.algebra().basis[a])] = to_string(s[a]);
    js[j.chart.symbols->name(i)] = c;
  }
  return js;
}

Jet jet_from_json(const nlohmann::json& js, const Chart& chart, int d, int r) {
  if (!js.is_object()) throw InputError("jet must be a JSON object");
  for (auto it = js.begin(); it != js.end(); ++it) {
    if (!chart.symbols->find(it.key())) throw InputError("unknown jet variable '" + it.key() + "'");
    if (!it.value().is_object()) throw InputError("jet coordinate '" + it.key() + "' must be an object");
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
      const std::string& k = jt.key();
      const int len = k.empty() ? 0 : static_cast<int>(std::count(k.begin(), k.end(), ',')) + 1;
      if (d < 0) d = len;
      const MultiIndex a = parse_index(k, static_cast<std::size_t>(d));
      r = std::max(r, index_weight(a));
    }
  }
  if (d < 0) d = 0;
  if (r < 0) r = 0;
  Jet j{chart, d, r, {}};
  for (std::size_t i = 0; i < chart.symbols->size(); ++i) {
    QSeries s(d, r, Rational(0));
    const std::string& name = chart.symbols->name(i);
    if (js.contains(name)) {
      for (auto jt = js[name].begin(); jt != js[name].end(); ++jt) {
        if (!jt.value().is_string() && !jt.value().is_number_integer())
          throw InputError("coefficient of " + name + " must be a rational string");
        const std::string txt = jt.value().is_string() ? jt.value().get<std::string>()
                                                       : std::to_string(jt.value().get<long long>());
        const std::size_t p = s.algebra().position(parse_index(jt.key(), static_cast<std::size_t>(d)));
        if (p == static_cast<std::size_t>(-1)) throw InputError("multi-index beyond jet order");
        s[p] = parse_rational(txt);
      }
    }
    j.coords.push_back(std::move(s));
  }
  return j;
}

std::vector<QSeries> push_forward(const std::vector<ChartFraction>& map, const Jet& j) {
  std::vector<QSeries> out;
  for (const auto& f : map) out.push_back(series_compose(f, j));
  return out;
}

}  // namespace hodgejet
