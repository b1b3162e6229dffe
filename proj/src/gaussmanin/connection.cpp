#include "hodgejet/gaussmanin/connection.hpp"

#include "hodgejet/exactalg/constructible.hpp"

namespace hodgejet {

namespace {

ChartFraction fzero(const ConnectionData& conn) {
  return ChartFraction::polynomial(MultiPoly(conn.chart.symbols), conn.units);
}

ChartFraction fconst(const ConnectionData& conn, const Rational& q) {
  return ChartFraction::polynomial(MultiPoly(conn.chart.symbols, q), conn.units);
}

FractionMatrix transpose_f(const FractionMatrix& x) { return x.transpose(); }

FractionMatrix multiply_f(const ConnectionData& conn, const FractionMatrix& a, const FractionMatrix& b) {
  FractionMatrix p(a.rows(), b.cols(), fzero(conn));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      ChartFraction acc = fzero(conn);
      for (std::size_t k = 0; k < a.cols(); ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) acc = acc + a(i, k) * b(k, j);
      p(i, j) = acc;
    }
  return p;
}

FractionMatrix derivative_f(const FractionMatrix& x, std::size_t var) {
  return x.map([&](const ChartFraction& q) { return q.derivative(var); });
}

const SeriesRing<Rational>& rational_ring() {
  static const SeriesRing<Rational> R{Rational(0), Rational(1), [](const Rational& q) { return q; }};
  return R;
}

QMatrix parse_qmatrix(const nlohmann::json& js, int m, const std::string& where) {
  if (!js.is_array() || static_cast<int>(js.size()) != m) throw InputError("expected an m x m matrix", where);
  QMatrix x(static_cast<std::size_t>(m), static_cast<std::size_t>(m), Rational(0));
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (!js[i].is_array() || static_cast<int>(js[i].size()) != m) throw InputError("expected an m x m matrix", where);
    for (std::size_t j = 0; j < js[i].size(); ++j) {
      const auto& v = js[i][j];
      x(i, j) = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
    }
  }
  return x;
}

}  // namespace

ConnectionData make_connection(Chart chart, FlagShape shape, std::vector<FractionMatrix> c) {
  shape.validate();
  ConnectionData conn;
  conn.units = std::make_shared<const std::vector<MultiPoly>>(chart.units);
  conn.chart = std::move(chart);
  conn.shape = std::move(shape);
  conn.c = std::move(c);
  if (conn.c.size() != conn.chart.symbols->size())
    throw ShapeError("need one connection matrix per chart variable");
  for (auto& cl : conn.c) {
    if (static_cast<int>(cl.rows()) != conn.m() || static_cast<int>(cl.cols()) != conn.m())
      throw ShapeError("connection matrices must be m x m");
    // Re-home every entry on the shared unit list.
    for (std::size_t i = 0; i < cl.rows(); ++i)
      for (std::size_t j = 0; j < cl.cols(); ++j)
        if (cl(i, j).units() != conn.units) {
          std::vector<int> pw = cl(i, j).powers();
          pw.resize(conn.units->size(), 0);
          cl(i, j) = ChartFraction(cl(i, j).numerator().symbols() ? cl(i, j).numerator().rebased(conn.chart.symbols)
                                                                  : MultiPoly(conn.chart.symbols, cl(i, j).numerator().constant_term()),
                                   pw, conn.units);
        }
  }
  conn.flat = validate_connection(conn, false).flat;
  return conn;
}

ConnectionData connection_from_json(const nlohmann::json& js) {
  if (!js.is_object()) throw InputError("problem must be a JSON object", "");
  if (!js.contains("variables") || !js["variables"].is_array()) throw InputError("missing variables", "/variables");
  std::vector<std::string> names;
  for (const auto& v : js["variables"]) names.push_back(v.get<std::string>());
  const Symbols s = make_symbols(names);
  std::vector<MultiPoly> rels, units;
  const auto rel_js = js.value("relations", nlohmann::json::array());
  for (std::size_t i = 0; i < rel_js.size(); ++i) {
    try {
      rels.push_back(parse_poly(rel_js[i].get<std::string>(), s));
    } catch (const InputError& e) {
      throw InputError(e.what(), "/relations/" + std::to_string(i));
    }
  }
  const auto unit_js = js.value("units", nlohmann::json::array());
  for (std::size_t i = 0; i < unit_js.size(); ++i) {
    try {
      units.push_back(parse_poly(unit_js[i].get<std::string>(), s));
    } catch (const InputError& e) {
      throw InputError(e.what(), "/units/" + std::to_string(i));
    }
  }
  if (!js.contains("m") || !js["m"].is_number_integer()) throw InputError("missing integer m", "/m");
  const int m = js["m"].get<int>();
  if (m < 1) throw InputError("m must be positive", "/m");
  if (!js.contains("filtration")) throw InputError("missing filtration", "/filtration");
  FlagShape shape = parse_shape(js["filtration"], m);

  Chart chart{s, Ideal(s, rels), units};
  const UnitList ul = std::make_shared<const std::vector<MultiPoly>>(units);
  const auto mm = static_cast<std::size_t>(m);
  std::vector<FractionMatrix> c(names.size(),
                                FractionMatrix(mm, mm, ChartFraction::polynomial(MultiPoly(s), ul)));
  const auto cjs = js.value("c", nlohmann::json::object());
  if (!cjs.is_object()) throw InputError("c must map variable names to matrices", "/c");
  for (auto it = cjs.begin(); it != cjs.end(); ++it) {
    const std::string where = "/c/" + it.key();
    const auto idx = s->find(it.key());
    if (!idx) throw InputError("unknown variable '" + it.key() + "'", where);
    const auto& rows = it.value();
    if (!rows.is_array() || rows.size() != mm) throw InputError("connection matrix must be m x m", where);
    for (std::size_t i = 0; i < mm; ++i) {
      if (!rows[i].is_array() || rows[i].size() != mm) throw InputError("connection matrix must be m x m", where);
      for (std::size_t j = 0; j < mm; ++j) {
        const auto& v = rows[i][j];
        const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
        const std::string at = where + "/" + std::to_string(i) + "/" + std::to_string(j);
        try {
          c[*idx](i, j) = parse_fraction(text, s, ul);
        } catch (const InputError& e) {
          throw InputError(std::string("c-entry ") + e.what(), at);
        }
      }
    }
  }
  ConnectionData conn = make_connection(chart, shape, std::move(c));
  if (js.contains("Q") && !js["Q"].is_null()) conn.polarization = parse_qmatrix(js["Q"], m, "/Q");
  if (js.contains("quasi_finite")) conn.quasi_finite = js["quasi_finite"].get<bool>();
  return conn;
}

nlohmann::json connection_to_json(const ConnectionData& conn) {
  nlohmann::json js;
  js["variables"] = conn.chart.symbols->names();
  js["relations"] = nlohmann::json::array();
  for (const auto& g : conn.chart.relations.generators()) js["relations"].push_back(g.to_string());
  js["units"] = nlohmann::json::array();
  for (const auto& u : *conn.units) js["units"].push_back(u.to_string());
  js["m"] = conn.m();
  js["filtration"] = conn.shape.dims;
  js["c"] = nlohmann::json::object();
  for (std::size_t l = 0; l < conn.n(); ++l) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < conn.c[l].rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < conn.c[l].cols(); ++j) row.push_back(conn.c[l](i, j).to_string());
      rows.push_back(row);
    }
    js["c"][conn.chart.symbols->name(l)] = rows;
  }
  if (conn.polarization) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < conn.polarization->rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < conn.polarization->cols(); ++j) row.push_back(to_string((*conn.polarization)(i, j)));
      rows.push_back(row);
    }
    js["Q"] = rows;
  }
  if (conn.quasi_finite) js["quasi_finite"] = *conn.quasi_finite;
  return js;
}

ConnectionData gauge_transform(const ConnectionData& conn, const QMatrix& G) {
  if (static_cast<int>(G.rows()) != conn.m() || G.rows() != G.cols()) throw ShapeError("gauge must be m x m");
  const QMatrix Ginv = inverse(G);
  auto lift = [&](const QMatrix& x) { return x.map([&](const Rational& q) { return fconst(conn, q); }); };
  std::vector<FractionMatrix> c;
  for (const auto& cl : conn.c) c.push_back(multiply_f(conn, multiply_f(conn, lift(G), cl), lift(Ginv)));
  ConnectionData out = make_connection(conn.chart, conn.shape, std::move(c));
  out.quasi_finite = conn.quasi_finite;
  if (conn.polarization) out.polarization = Ginv.transpose() * (*conn.polarization) * Ginv;
  return out;
}

nlohmann::json ConnectionReport::to_json() const {
  nlohmann::json js{{"flat", flat}, {"valid", valid()}, {"failures", failures}};
  if (transversality_checked) js["transversal"] = transversal;
  return js;
}

ConnectionReport validate_connection(const ConnectionData& conn, bool check_transversality, const Budget& budget) {
  ConnectionReport rep;
  const auto& names = conn.chart.symbols->names();
  std::vector<MultiPoly> rel_basis;
  if (!conn.chart.relations.is_zero_ideal()) rel_basis = groebner(conn.chart.relations, MonomialOrder::grevlex(), budget);

  for (std::size_t a = 0; a < conn.n(); ++a)
    for (std::size_t b = a + 1; b < conn.n(); ++b) {
      const FractionMatrix ca = transpose_f(conn.c[a]), cb = transpose_f(conn.c[b]);
      const FractionMatrix lhs = derivative_f(cb, a) - derivative_f(ca, b);
      const FractionMatrix rhs = multiply_f(conn, cb, ca) - multiply_f(conn, ca, cb);
      for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j) {
          const ChartFraction diff = lhs(i, j) - rhs(i, j);
          if (diff.is_zero()) continue;
          if (!rel_basis.empty() && normal_form(diff.numerator(), rel_basis).is_zero()) continue;
          rep.flat = false;
          rep.failures.push_back("curvature entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ") for variables " + names[a] + ", " + names[b] + " is " + diff.to_string());
        }
    }

  if (check_transversality) {
    rep.transversality_checked = true;
    const auto& dims = conn.shape.dims;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k)
      for (std::size_t l = 0; l < conn.n(); ++l)
        for (int i = 0; i < dims[k]; ++i)
          for (int j = dims[k + 1]; j < conn.m(); ++j)
            if (!conn.c[l](static_cast<std::size_t>(i), static_cast<std::size_t>(j)).is_zero()) {
              rep.transversal = false;
              rep.failures.push_back("transversality: c[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                     "] for " + names[l] + " must vanish");
            }
  }
  return rep;
}

XiTable::XiTable(const ConnectionData& conn) : conn_(&conn) {}

const FractionMatrix& XiTable::get(const std::vector<int>& word) {
  if (word.empty()) throw InputError("xi needs a non-empty word");
  for (int l : word)
    if (l < 0 || static_cast<std::size_t>(l) >= conn_->n()) throw InputError("xi word names an unknown variable");
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(word); it != memo_.end()) return it->second;
  }
  FractionMatrix value;
  const auto last = static_cast<std::size_t>(word.back());
  const FractionMatrix ct = transpose_f(conn_->c[last]);
  if (word.size() == 1) {
    value = ct.map([](const ChartFraction& q) { return -q; });
  } else {
    const FractionMatrix& prev = get(std::vector<int>(word.begin(), word.end() - 1));
    value = derivative_f(prev, last) - multiply_f(*conn_, prev, ct);
  }
  std::lock_guard lock(mutex_);
  return memo_.emplace(word, std::move(value)).first->second;
}

FractionMatrix xi_polynomials(const ConnectionData& conn, const std::vector<int>& word) {
  XiTable table(conn);
  return table.get(word);
}

FrameJet flat_frame_jet(const ConnectionData& conn, const Jet& j, const QMatrix& P) {
  if (!conn.flat) throw Error("connection is not flat; the frame equations have no solution");
  if (static_cast<int>(P.rows()) != conn.m() || P.rows() != P.cols()) throw ShapeError("initial frame must be m x m");
  if (determinant(P) == 0) throw InputError("initial frame must be invertible");
  if (j.coords.size() != conn.n()) throw ShapeError("jet does not live on the connection's chart");
  const auto base = j.base_point();
  std::vector<Rational> unit_inv;
  for (const auto& u : *conn.units) {
    const Rational v = u.evaluate(base);
    if (v == 0) throw PoleError("unit " + u.to_string() + " vanishes at the jet's base point");
    unit_inv.push_back(1 / v);
  }
  const auto& R = rational_ring();
  const auto B = pulled_back_connection<Rational>(conn, j.coords, unit_inv, R);
  return FrameJet{solve_frame<Rational>(B, P, j.d, j.r, R), j, P};
}

PeriodJetRep period_jet(const ConnectionData& conn, const Jet& j) {
  const auto m = static_cast<std::size_t>(conn.m());
  const FrameJet fj = flat_frame_jet(conn, j, identity_q(m));
  const auto& R = rational_ring();
  PeriodJetRep rep;
  rep.A = series_matrix_inverse<Rational>(fj.f, identity_q(m), R);
  QMatrix a0(m, static_cast<std::size_t>(conn.shape.top()), Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < a0.cols(); ++c) a0(i, c) = rep.A(i, c)[0];
  rep.chart = flag_chart(conn.shape, flag_from_basis(a0, conn.shape).pivots);
  std::vector<QMatrix> pivot_inv;
  for (int k = 0; k < conn.shape.steps(); ++k) {
    std::vector<std::size_t> cols(static_cast<std::size_t>(conn.shape.dims[static_cast<std::size_t>(k)]));
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = c;
    pivot_inv.push_back(inverse(a0.select(rep.chart.pivot_rows(k), cols)));
  }
  rep.coords = flag_chart_jet<Rational>(rep.A, rep.chart, pivot_inv, R);
  return rep;
}

namespace {

nlohmann::json series_to_json(const QSeries& s) {
  nlohmann::json js = nlohmann::json::object();
  for (std::size_t a = 0; a < s.size(); ++a)
    if (s[a] != 0) js[index_string(s.algebra().basis[a])] = to_string(s[a]);
  return js;
}

}  // namespace

nlohmann::json series_matrix_to_json(const SeriesMatrix<Rational>& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(series_to_json(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json PeriodJetRep::to_json() const {
  nlohmann::json js;
  js["chart"] = chart.id();
  js["pivots"] = pivots_to_json(chart.pivots);
  js["coords"] = nlohmann::json::object();
  for (std::size_t v = 0; v < coords.size(); ++v) js["coords"][chart.symbols->name(v)] = series_to_json(coords[v]);
  js["A"] = series_matrix_to_json(A);
  return js;
}

}  // namespace hodgejet
