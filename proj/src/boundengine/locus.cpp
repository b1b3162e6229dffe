#include "hodgejet/boundengine/locus.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace hodgejet {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

SeriesRing<MultiPoly> poly_ring(const Symbols& s) {
  return {MultiPoly(s), MultiPoly(s, Rational(1)), [s](const Rational& q) { return MultiPoly(s, q); }};
}

const SeriesRing<Rational>& q_ring() {
  static const SeriesRing<Rational> R{Rational(0), Rational(1), [](const Rational& q) { return q; }};
  return R;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

bool contains_row(const std::vector<std::size_t>& rows, std::size_t r) {
  return std::find(rows.begin(), rows.end(), r) != rows.end();
}

void push_coefficients(std::vector<MultiPoly>& out, const PolySeries& s) {
  for (std::size_t a = 0; a < s.size(); ++a)
    if (!s[a].is_zero()) out.push_back(s[a]);
}

LocusStratum build_stratum(const SymbolicPeriod& P, const ConnectionData& conn, const ChartIdeal& ci,
                           bool parabolic, int e, bool base_nd) {
  const FlagShape& shape = conn.shape;
  const auto m = static_cast<std::size_t>(shape.m);
  const int dp = P.space.d, r = P.space.r;
  const auto alg = DiskAlgebra::get(dp, r);

  LocusStratum st;
  st.chart = flag_chart(shape, ci.pivots);
  st.parabolic = parabolic;
  std::vector<std::string> names = P.symbols->names();
  StratumLayout& L = st.layout;
  L.jet_count = P.jet_count();
  L.unit_count = P.unit_relations.size();
  L.dprime = dp;
  L.r = r;
  L.g = Matrix<std::size_t>(m, m, npos);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (parabolic && static_cast<int>(j) < shape.top() &&
          static_cast<int>(i) >= shape.dims[static_cast<std::size_t>(shape.block_of(static_cast<int>(j)))])
        continue;
      L.g(i, j) = names.size();
      names.push_back("g[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]");
    }
  L.u = names.size();
  names.push_back("u");
  L.n.resize(static_cast<std::size_t>(shape.steps()));
  for (int k = 0; k < shape.steps(); ++k) {
    const auto rows = st.chart.pivot_rows(k);
    for (std::size_t row = 0; row < m; ++row) {
      if (contains_row(rows, row)) continue;
      for (int q = 0; q < shape.dims[static_cast<std::size_t>(k)]; ++q) {
        std::vector<std::size_t> vars;
        const std::string base = "n" + std::to_string(k + 1) + "[" + std::to_string(row + 1) + "," +
                                 std::to_string(q + 1) + "]";
        for (const auto& alpha : alg->basis) {
          vars.push_back(names.size());
          names.push_back(jet_variable_name(base, alpha));
        }
        L.n[static_cast<std::size_t>(k)].push_back({{static_cast<int>(row), q}, std::move(vars)});
      }
    }
  }
  st.symbols = make_symbols(names);
  const Symbols& S = st.symbols;
  const MultiPoly zero(S);
  const auto R = poly_ring(S);

  if (!P.space.ideal.is_zero_ideal()) st.equations.push_back({"jet-relations", P.space.ideal.rebased(S)});
  {
    std::vector<MultiPoly> rel;
    for (const auto& p : P.unit_relations) rel.push_back(p.rebased(S));
    if (!rel.empty()) st.equations.push_back({"unit-inverses", Ideal(S, std::move(rel))});
  }
  Matrix<MultiPoly> G(m, m, zero);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (L.g(i, j) != npos) G(i, j) = MultiPoly::variable(S, L.g(i, j));
  st.equations.push_back(
      {"group", Ideal(S, {MultiPoly::variable(S, L.u) * determinant_expand(G, zero) - MultiPoly(S, Rational(1))})});

  // gA on the first top columns.
  const auto top = static_cast<std::size_t>(shape.top());
  SeriesMatrix<MultiPoly> gA(m, top, PolySeries(dp, r, zero));
  {
    SeriesMatrix<MultiPoly> A(m, top, PolySeries(dp, r, zero));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < top; ++c)
        for (std::size_t a = 0; a < alg->size(); ++a)
          if (!P.A(i, c)[a].is_zero()) A(i, c)[a] = P.A(i, c)[a].rebased(S);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < top; ++c)
        for (std::size_t j = 0; j < m; ++j)
          if (!G(i, j).is_zero()) gA(i, c) = gA(i, c) + G(i, j) * A(j, c);
  }
  auto n_series = [&](const std::vector<std::size_t>& vars) {
    PolySeries s(dp, r, zero);
    for (std::size_t a = 0; a < vars.size(); ++a) s[a] = MultiPoly::variable(S, vars[a]);
    return s;
  };

  std::vector<MultiPoly> trans;
  // Chart coordinate series, indexed like st.chart.cells.
  std::vector<PolySeries> coords(st.chart.cells.size(), PolySeries(dp, r, zero));
  for (int k = 0; k < shape.steps(); ++k) {
    const auto rows = st.chart.pivot_rows(k);
    const auto& blocks = L.n[static_cast<std::size_t>(k)];
    for (std::size_t b = 0; b < blocks.size(); b += static_cast<std::size_t>(shape.dims[static_cast<std::size_t>(k)])) {
      const auto row = static_cast<std::size_t>(blocks[b].first.first);
      for (int c = 0; c < shape.dims[static_cast<std::size_t>(k)]; ++c) {
        PolySeries eq = gA(row, static_cast<std::size_t>(c));
        for (int q = 0; q < shape.dims[static_cast<std::size_t>(k)]; ++q)
          eq = eq - n_series(blocks[b + static_cast<std::size_t>(q)].second) *
                        gA(rows[static_cast<std::size_t>(q)], static_cast<std::size_t>(c));
        push_coefficients(trans, eq);
      }
      for (int q = 0; q < shape.dims[static_cast<std::size_t>(k)]; ++q) {
        if (shape.block_of(q) != k) continue;
        for (std::size_t v = 0; v < st.chart.cells.size(); ++v)
          if (st.chart.cells[v] == std::pair<int, int>{static_cast<int>(row), q})
            coords[v] = n_series(blocks[b + static_cast<std::size_t>(q)].second);
      }
    }
  }
  st.equations.push_back({"translation", Ideal(S, std::move(trans))});

  std::vector<MultiPoly> type_eqs;
  for (const auto& h : ci.ideal.generators())
    push_coefficients(type_eqs, compose_poly<MultiPoly>(h, coords, R.from, dp, r, zero));
  if (!ci.ideal.is_zero_ideal()) st.equations.push_back({"type", Ideal(S, std::move(type_eqs))});

  if (base_nd) st.families.push_back({"base-nondegenerate", nondegeneracy_stratum(P.space, dp).rebased(S)});
  if (e >= 1) {
    Matrix<MultiPoly> lin(coords.size(), static_cast<std::size_t>(e), zero);
    for (std::size_t v = 0; v < coords.size(); ++v)
      for (int a = 0; a < e; ++a) lin(v, static_cast<std::size_t>(a)) = coords[v][alg->unit_index(a)];
    std::vector<MultiPoly> minors;
    if (coords.size() >= static_cast<std::size_t>(e))
      for (const auto& rows : combinations(coords.size(), static_cast<std::size_t>(e)))
        minors.push_back(determinant_expand(lin.select(rows, iota(static_cast<std::size_t>(e))), zero));
    st.families.push_back({"flag-nondegenerate", Ideal(S, std::move(minors))});
  }
  return st;
}

LocusSystem build_system(const ConnectionData& conn, const TypeRep& W, int dprime, int r, int e, bool base_nd) {
  if (!(W.shape == conn.shape))
    throw ShapeError("type " + W.name + " has shape " + W.shape.to_string() + " but the connection has " +
                     conn.shape.to_string());
  const auto P = symbolic_period(conn, dprime, r);
  LocusSystem sys;
  sys.type = W.name;
  sys.dprime = dprime;
  sys.r = r;
  sys.e = e;
  const auto std_chart = standard_chart(conn.shape);
  const auto idx = W.find_chart(std_chart.pivots);
  if (W.homogeneous && idx) {
    sys.strata.push_back(build_stratum(*P, conn, W.charts[*idx], true, e, base_nd));
  } else {
    for (const auto& ci : W.charts) sys.strata.push_back(build_stratum(*P, conn, ci, false, e, base_nd));
  }
  return sys;
}

}  // namespace

std::shared_ptr<const SymbolicPeriod> symbolic_period(const ConnectionData& conn, int dprime, int r) {
  if (!conn.flat) throw Error("connection is not flat; the frame equations have no solution");
  if (dprime < 1 || r < 0) throw InputError("jet parameters out of range");
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const SymbolicPeriod>> cache;
  const std::string key =
      connection_to_json(conn).dump() + "|" + std::to_string(dprime) + "|" + std::to_string(r);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto P = std::make_shared<SymbolicPeriod>();
  P->space = prolong_ideal(conn.chart, dprime, r);
  std::vector<std::string> wn, fresh;
  for (std::size_t i = 0; i < conn.units->size(); ++i) wn.push_back("w" + std::to_string(i + 1));
  P->symbols = extend_symbols(P->space.symbols, wn, &fresh);
  const Symbols& S = P->symbols;
  const auto R = poly_ring(S);
  std::vector<PolySeries> z;
  for (const auto& s : P->space.generic_series()) {
    PolySeries t(dprime, r, R.zero);
    for (std::size_t a = 0; a < s.size(); ++a) t[a] = s[a].rebased(S);
    z.push_back(std::move(t));
  }
  std::vector<MultiPoly> winv;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    winv.push_back(MultiPoly::variable(S, fresh[i]));
    const auto u0 = compose_poly<MultiPoly>((*conn.units)[i], z, R.from, dprime, r, R.zero)[0];
    P->unit_relations.push_back(winv.back() * u0 - R.one);
  }
  const auto m = static_cast<std::size_t>(conn.m());
  const auto Id = Matrix<MultiPoly>::identity(m, R.zero, R.one);
  const auto B = pulled_back_connection<MultiPoly>(conn, z, winv, R);
  const auto f = solve_frame<MultiPoly>(B, Id, dprime, r, R);
  P->A = series_matrix_inverse<MultiPoly>(f, Id, R);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(P)).first->second;
}

Ideal LocusStratum::ideal() const {
  Ideal I(symbols);
  for (const auto& c : equations)
    for (const auto& g : c.ideal.generators()) I.add(g);
  return I;
}

std::vector<Ideal> LocusStratum::family_ideals() const {
  std::vector<Ideal> out;
  for (const auto& c : families) out.push_back(c.ideal);
  return out;
}

Ideal LocusStratum::ideal_of(const std::vector<std::string>& tags) const {
  Ideal I(symbols);
  for (const auto& c : equations)
    if (std::find(tags.begin(), tags.end(), c.tag) != tags.end())
      for (const auto& g : c.ideal.generators()) I.add(g);
  return I;
}

std::vector<Ideal> LocusStratum::families_of(const std::vector<std::string>& tags) const {
  std::vector<Ideal> out;
  for (const auto& c : families)
    if (std::find(tags.begin(), tags.end(), c.tag) != tags.end()) out.push_back(c.ideal);
  return out;
}

nlohmann::json LocusSystem::to_json(bool with_polynomials) const {
  nlohmann::json js;
  js["type"] = type;
  js["dprime"] = dprime;
  js["r"] = r;
  if (e >= 0) js["e"] = e;
  js["strata"] = nlohmann::json::array();
  for (const auto& st : strata) {
    nlohmann::json s;
    s["chart"] = st.chart.id();
    s["parabolic"] = st.parabolic;
    s["variables"] = st.symbols->size();
    auto block = [&](const Constraint& c) {
      nlohmann::json b;
      b["tag"] = c.tag;
      b["count"] = c.ideal.generators().size();
      if (with_polynomials) b["polynomials"] = nlohmann::json::parse(serialize_basis(c.ideal.generators()));
      return b;
    };
    for (const auto& c : st.equations) s["equations"].push_back(block(c));
    s["families"] = nlohmann::json::array();
    for (const auto& c : st.families) s["families"].push_back(block(c));
    js["strata"].push_back(std::move(s));
  }
  return js;
}

LocusSystem t_locus_system(const ConnectionData& conn, const TypeRep& W, int dprime, int r) {
  return build_system(conn, W, dprime, r, -1, false);
}

LocusSystem k_system(const ConnectionData& conn, const TypeRep& C, int e, int d, int r) {
  if (r < 1) throw InputError("K-systems need jets of order at least 1");
  if (e < 0 || d < 0 || e > d + 1) throw InputError("need 0 <= e <= d + 1");
  return build_system(conn, C, d + 1, r, e, true);
}

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Empty: return "empty";
    case CellStatus::Nonempty: return "nonempty";
    default: return "unknown";
  }
}

EmptinessResult k_emptiness(const LocusSystem& sys, const Budget& budget) {
  EmptinessResult out;
  bool unknown = false;
  for (const auto& st : sys.strata) {
    // A subsystem without solutions already certifies the stratum empty.
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> parts = {
        {{"type"}, {"flag-nondegenerate"}},
        {{"jet-relations", "unit-inverses"}, {"base-nondegenerate"}},
    };
    bool done = false;
    for (const auto& [eqs, fams] : parts) {
      const auto families = st.families_of(fams);
      if (families.empty()) continue;
      const auto res = check_consistent_families(st.ideal_of(eqs), families, budget);
      if (res.consistent == Tri::False) {
        out.certificates.push_back(serialize_basis(res.certificate));
        out.note = "subsystem " + eqs.front();
        done = true;
        break;
      }
    }
    if (done) continue;
    const auto res = check_consistent_families(st.ideal(), st.family_ideals(), budget);
    if (res.consistent == Tri::True) {
      out.status = CellStatus::Nonempty;
      out.certificates = {serialize_basis(res.certificate)};
      out.note = "consistent on chart " + st.chart.id();
      return out;
    }
    if (res.consistent == Tri::Unknown) {
      unknown = true;
      out.note = res.note;
      out.certificates.push_back("unknown: " + res.note);
    } else {
      out.certificates.push_back(serialize_basis(res.certificate));
    }
  }
  out.status = unknown ? CellStatus::Unknown : CellStatus::Empty;
  return out;
}

std::optional<std::vector<Rational>> stratum_point(const LocusStratum& st, const ConnectionData& conn, const Jet& jet,
                                                   const QMatrix& g) {
  const StratumLayout& L = st.layout;
  const auto m = static_cast<std::size_t>(conn.m());
  if (jet.d != L.dprime || jet.r != L.r || jet.coords.size() != conn.n()) return std::nullopt;
  std::vector<Rational> pt(st.symbols->size(), Rational(0));
  const auto alg = DiskAlgebra::get(L.dprime, L.r);
  for (std::size_t i = 0; i < jet.coords.size(); ++i)
    for (std::size_t a = 0; a < alg->size(); ++a) pt[i * alg->size() + a] = jet.coords[i][a];
  const auto base = jet.base_point();
  for (std::size_t i = 0; i < L.unit_count; ++i) {
    const Rational v = (*conn.units)[i].evaluate(base);
    if (v == 0) return std::nullopt;
    pt[L.jet_count + i] = 1 / v;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (L.g(i, j) == npos) {
        if (g(i, j) != 0) return std::nullopt;
      } else {
        pt[L.g(i, j)] = g(i, j);
      }
    }
  const Rational det = determinant(g);
  if (det == 0) return std::nullopt;
  pt[L.u] = 1 / det;

  SeriesMatrix<Rational> A;
  try {
    A = period_jet(conn, jet).A;
  } catch (const PoleError&) {
    return std::nullopt;
  }
  SeriesMatrix<Rational> G(m, m, QSeries(L.dprime, L.r));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) G(i, j) = QSeries::constant(L.dprime, L.r, g(i, j));
  const auto gA = G * A;
  for (int k = 0; k < conn.shape.steps(); ++k) {
    const auto cols = iota(static_cast<std::size_t>(conn.shape.dims[static_cast<std::size_t>(k)]));
    const auto M = gA.select(iota(m), cols);
    const auto Mp = M.select(st.chart.pivot_rows(k), cols);
    const QMatrix c0 = Mp.map([](const QSeries& s) -> Rational { return s[0]; });
    if (determinant(c0) == 0) return std::nullopt;
    const auto N = M * series_matrix_inverse<Rational>(Mp, inverse(c0), q_ring());
    for (const auto& [rq, vars] : L.n[static_cast<std::size_t>(k)])
      for (std::size_t a = 0; a < vars.size(); ++a)
        pt[vars[a]] = N(static_cast<std::size_t>(rq.first), static_cast<std::size_t>(rq.second))[a];
  }
  return pt;
}

bool satisfies(const LocusStratum& st, std::span<const Rational> point) {
  for (const auto& c : st.equations)
    for (const auto& g : c.ideal.generators())
      if (g.evaluate(point) != 0) return false;
  for (const auto& c : st.families) {
    bool any = false;
    for (const auto& g : c.ideal.generators())
      if (g.evaluate(point) != 0) {
        any = true;
        break;
      }
    if (!any) return false;
  }
  return true;
}

LocusSystem fix_jet(const LocusSystem& sys, const Jet& jet) {
  LocusSystem out = sys;
  for (auto& st : out.strata) {
    const StratumLayout& L = st.layout;
    if (jet.d != L.dprime || jet.r != L.r) throw ShapeError("jet does not match the locus system");
    const std::size_t off = L.jet_count + L.unit_count;
    std::vector<std::string> names(st.symbols->names().begin() + static_cast<std::ptrdiff_t>(off),
                                   st.symbols->names().end());
    const Symbols T = make_symbols(names);
    std::vector<MultiPoly> images;
    const auto alg = DiskAlgebra::get(L.dprime, L.r);
    for (std::size_t i = 0; i < jet.coords.size(); ++i)
      for (std::size_t a = 0; a < alg->size(); ++a) images.emplace_back(T, jet.coords[i][a]);
    if (images.size() != L.jet_count) throw ShapeError("jet does not match the locus system");
    // Each unit relation reads w_i * unit_i(x[0]) - 1, so setting w_i = 1
    // reads off unit_i at the base point.
    const Constraint* units = nullptr;
    for (const auto& c : st.equations)
      if (c.tag == "unit-inverses") units = &c;
    for (std::size_t i = 0; i < L.unit_count; ++i) {
      std::vector<Rational> pt(st.symbols->size(), Rational(0));
      for (std::size_t x = 0; x < L.jet_count; ++x) pt[x] = images[x].constant_term();
      pt[L.jet_count + i] = 1;
      const Rational v = units->ideal.generators().at(i).evaluate(pt) + 1;
      images.emplace_back(T, v == 0 ? Rational(0) : Rational(1 / v));
    }
    for (std::size_t v = off; v < st.symbols->size(); ++v) images.push_back(MultiPoly::variable(T, v - off));
    auto sub = [&](const Ideal& I) {
      std::vector<MultiPoly> gens;
      for (const auto& g : I.generators()) gens.push_back(g.substitute(images, T));
      return Ideal(T, std::move(gens));
    };
    for (auto& c : st.equations) c.ideal = sub(c.ideal);
    for (auto& c : st.families) c.ideal = sub(c.ideal);
    st.symbols = T;
    StratumLayout& M = st.layout;
    for (std::size_t i = 0; i < M.g.rows(); ++i)
      for (std::size_t j = 0; j < M.g.cols(); ++j)
        if (M.g(i, j) != npos) M.g(i, j) -= off;
    M.u -= off;
    for (auto& blk : M.n)
      for (auto& [rq, vars] : blk)
        for (auto& x : vars) x -= off;
    M.jet_count = 0;
    M.unit_count = 0;
  }
  return out;
}

}  // namespace hodgejet
