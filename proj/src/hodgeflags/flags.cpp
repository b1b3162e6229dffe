#include "hodgejet/hodgeflags/flags.hpp"

#include <algorithm>
#include <functional>

namespace hodgejet {

void FlagShape::validate() const {
  if (m < 1) throw ShapeError("flag shape needs m >= 1");
  if (dims.empty()) throw ShapeError("flag shape needs at least one step");
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] < 1 || dims[k] > m) throw ShapeError("flag step dimension out of range in " + to_string());
    if (k && dims[k] <= dims[k - 1]) throw ShapeError("flag dimensions must increase in " + to_string());
  }
}

int FlagShape::block_of(int column) const {
  for (int k = 0; k < steps(); ++k)
    if (column < dims[static_cast<std::size_t>(k)]) return k;
  throw ShapeError("column beyond the flag");
}

int FlagShape::variety_dimension() const {
  int dim = 0, prev = 0;
  for (int d : dims) {
    dim += (d - prev) * (m - d);
    prev = d;
  }
  return dim;
}

std::string FlagShape::to_string() const {
  std::string s = "m=" + std::to_string(m) + " (";
  for (std::size_t k = 0; k < dims.size(); ++k) s += (k ? "," : "") + std::to_string(dims[k]);
  return s + ")";
}

FlagShape parse_shape(const nlohmann::json& js, int m) {
  if (!js.is_array()) throw InputError("filtration must be an array of step dimensions");
  FlagShape s;
  s.m = m;
  for (const auto& v : js) {
    if (!v.is_number_integer()) throw InputError("filtration entries must be integers");
    s.dims.push_back(v.get<int>());
  }
  s.validate();
  return s;
}

std::string FlagChart::id() const {
  std::string s;
  for (int k = 0; k < shape.steps(); ++k) {
    if (k) s += '|';
    const int lo = k ? shape.dims[static_cast<std::size_t>(k - 1)] : 0;
    for (int c = lo; c < shape.dims[static_cast<std::size_t>(k)]; ++c) {
      if (c > lo) s += ',';
      s += std::to_string(pivots[static_cast<std::size_t>(c)] + 1);
    }
  }
  return s;
}

std::vector<std::size_t> FlagChart::pivot_rows(int step) const {
  std::vector<std::size_t> rows;
  for (int c = 0; c < shape.dims[static_cast<std::size_t>(step)]; ++c)
    rows.push_back(static_cast<std::size_t>(pivots[static_cast<std::size_t>(c)]));
  return rows;
}

Matrix<MultiPoly> FlagChart::basis_matrix() const {
  Matrix<MultiPoly> b(static_cast<std::size_t>(shape.m), static_cast<std::size_t>(shape.top()),
                      MultiPoly(symbols));
  for (int c = 0; c < shape.top(); ++c)
    b(static_cast<std::size_t>(pivots[static_cast<std::size_t>(c)]), static_cast<std::size_t>(c)) =
        MultiPoly(symbols, Rational(1));
  for (std::size_t i = 0; i < cells.size(); ++i)
    b(static_cast<std::size_t>(cells[i].first), static_cast<std::size_t>(cells[i].second)) =
        MultiPoly::variable(symbols, i);
  return b;
}

QMatrix FlagChart::basis_at(std::span<const Rational> coords) const {
  if (coords.size() != cells.size()) throw ShapeError("chart coordinate count mismatch");
  QMatrix b(static_cast<std::size_t>(shape.m), static_cast<std::size_t>(shape.top()), Rational(0));
  for (int c = 0; c < shape.top(); ++c)
    b(static_cast<std::size_t>(pivots[static_cast<std::size_t>(c)]), static_cast<std::size_t>(c)) = 1;
  for (std::size_t i = 0; i < cells.size(); ++i)
    b(static_cast<std::size_t>(cells[i].first), static_cast<std::size_t>(cells[i].second)) = coords[i];
  return b;
}

namespace {

std::vector<std::size_t> first_columns(int n) {
  std::vector<std::size_t> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  return c;
}

std::vector<std::size_t> all_rows(int m) { return first_columns(m); }

// N_k = M_k * M_k[R_k]^{-1} for every step.
std::vector<QMatrix> normalized_steps(const FlagChart& ch, const QMatrix& m) {
  std::vector<QMatrix> out;
  for (int k = 0; k < ch.shape.steps(); ++k) {
    const auto cols = first_columns(ch.shape.dims[static_cast<std::size_t>(k)]);
    const QMatrix mk = m.select(all_rows(ch.shape.m), cols);
    const QMatrix sq = mk.select(ch.pivot_rows(k), first_columns(static_cast<int>(cols.size())));
    if (determinant(sq) == 0) throw Error("flag is outside chart " + ch.id());
    out.push_back(mk * inverse(sq));
  }
  return out;
}

}  // namespace

bool FlagChart::contains(const QMatrix& m) const {
  for (int k = 0; k < shape.steps(); ++k) {
    const QMatrix sq = m.select(pivot_rows(k), first_columns(shape.dims[static_cast<std::size_t>(k)]));
    if (determinant(sq) == 0) return false;
  }
  return true;
}

std::vector<Rational> FlagChart::coordinates(const QMatrix& m) const {
  if (m.rows() != static_cast<std::size_t>(shape.m) || m.cols() < static_cast<std::size_t>(shape.top()))
    throw ShapeError("flag basis has the wrong size");
  const auto n = normalized_steps(*this, m);
  std::vector<Rational> y;
  for (const auto& [r, c] : cells)
    y.push_back(n[static_cast<std::size_t>(shape.block_of(c))](static_cast<std::size_t>(r),
                                                               static_cast<std::size_t>(c)));
  return y;
}

Pivots parse_pivots(const nlohmann::json& js, const FlagShape& shape) {
  if (!js.is_array()) throw InputError("pivots must be an array");
  Pivots p;
  if (!js.empty() && js[0].is_array()) {
    // Nested per-step sets.
    if (static_cast<int>(js.size()) != shape.steps()) throw ShapeError("one pivot set per flag step required");
    std::vector<int> prev;
    for (std::size_t k = 0; k < js.size(); ++k) {
      std::vector<int> set;
      for (const auto& v : js[k]) set.push_back(v.get<int>() - 1);
      std::sort(set.begin(), set.end());
      if (static_cast<int>(set.size()) != shape.dims[k]) throw ShapeError("pivot set has the wrong size");
      if (!std::includes(set.begin(), set.end(), prev.begin(), prev.end()))
        throw ShapeError("pivot sets are not nested");
      std::vector<int> fresh;
      std::set_difference(set.begin(), set.end(), prev.begin(), prev.end(), std::back_inserter(fresh));
      p.insert(p.end(), fresh.begin(), fresh.end());
      prev = set;
    }
    return p;
  }
  for (const auto& v : js) {
    if (!v.is_number_integer()) throw InputError("pivot rows must be integers");
    p.push_back(v.get<int>() - 1);
  }
  return p;
}

nlohmann::json pivots_to_json(const Pivots& p) {
  nlohmann::json a = nlohmann::json::array();
  for (int r : p) a.push_back(r + 1);
  return a;
}

FlagChart flag_chart(const FlagShape& shape, Pivots pivots) {
  shape.validate();
  if (static_cast<int>(pivots.size()) != shape.top()) throw ShapeError("need one pivot row per flag column");
  std::vector<bool> used(static_cast<std::size_t>(shape.m), false);
  for (int r : pivots) {
    if (r < 0 || r >= shape.m) throw ShapeError("pivot row out of range");
    if (used[static_cast<std::size_t>(r)]) throw ShapeError("repeated pivot row");
    used[static_cast<std::size_t>(r)] = true;
  }
  int lo = 0;
  for (int d : shape.dims) {
    std::sort(pivots.begin() + lo, pivots.begin() + d);
    lo = d;
  }
  FlagChart ch{shape, pivots, nullptr, {}};
  std::vector<std::string> names;
  for (int c = 0; c < shape.top(); ++c) {
    const int k = shape.block_of(c);
    const auto rows = ch.pivot_rows(k);
    for (int r = 0; r < shape.m; ++r) {
      if (std::find(rows.begin(), rows.end(), static_cast<std::size_t>(r)) != rows.end()) continue;
      ch.cells.emplace_back(r, c);
      names.push_back("y[" + std::to_string(r + 1) + "," + std::to_string(c + 1) + "]");
    }
  }
  ch.symbols = make_symbols(names);
  return ch;
}

std::vector<FlagChart> flag_atlas(const FlagShape& shape) {
  shape.validate();
  std::vector<FlagChart> out;
  Pivots cur;
  std::vector<bool> used(static_cast<std::size_t>(shape.m), false);
  std::function<void(int)> rec = [&](int step) {
    if (step == shape.steps()) {
      out.push_back(flag_chart(shape, cur));
      return;
    }
    const int need = shape.dims[static_cast<std::size_t>(step)] - (step ? shape.dims[static_cast<std::size_t>(step - 1)] : 0);
    std::vector<std::size_t> free_rows;
    for (int r = 0; r < shape.m; ++r)
      if (!used[static_cast<std::size_t>(r)]) free_rows.push_back(static_cast<std::size_t>(r));
    for (const auto& pick : combinations(free_rows.size(), static_cast<std::size_t>(need))) {
      for (auto i : pick) {
        cur.push_back(static_cast<int>(free_rows[i]));
        used[free_rows[i]] = true;
      }
      rec(step + 1);
      for (auto i : pick) {
        cur.pop_back();
        used[free_rows[i]] = false;
      }
    }
  };
  rec(0);
  return out;
}

FlagChart standard_chart(const FlagShape& shape) {
  Pivots p(static_cast<std::size_t>(shape.top()));
  for (int c = 0; c < shape.top(); ++c) p[static_cast<std::size_t>(c)] = c;
  return flag_chart(shape, p);
}

std::vector<Rational> FlagPoint::coordinates() const { return flag_chart(shape, pivots).coordinates(basis); }

FlagPoint flag_from_basis(const QMatrix& basis, const FlagShape& shape) {
  shape.validate();
  if (basis.rows() != static_cast<std::size_t>(shape.m) || basis.cols() < static_cast<std::size_t>(shape.top()))
    throw ShapeError("flag basis has the wrong size");
  Pivots pivots;
  std::vector<std::size_t> rows;
  for (int k = 0; k < shape.steps(); ++k) {
    const int ik = shape.dims[static_cast<std::size_t>(k)];
    const auto cols = first_columns(ik);
    std::vector<int> fresh;
    for (int r = 0; r < shape.m && static_cast<int>(rows.size()) < ik; ++r) {
      if (std::find(rows.begin(), rows.end(), static_cast<std::size_t>(r)) != rows.end()) continue;
      auto trial = rows;
      trial.push_back(static_cast<std::size_t>(r));
      if (rank(basis.select(trial, cols)) == trial.size()) {
        rows = trial;
        fresh.push_back(r);
      }
    }
    if (static_cast<int>(rows.size()) < ik) throw Error("flag basis is rank deficient");
    pivots.insert(pivots.end(), fresh.begin(), fresh.end());
  }
  FlagChart ch = flag_chart(shape, pivots);
  const auto y = ch.coordinates(basis);
  return FlagPoint{shape, ch.pivots, ch.basis_at(y)};
}

FlagPoint q_flag(const QMatrix& M, const FlagShape& shape) {
  if (M.rows() != static_cast<std::size_t>(shape.m) || M.cols() != M.rows())
    throw ShapeError("q_flag needs an m x m matrix");
  if (determinant(M) == 0) throw Error("q_flag of a singular matrix");
  return flag_from_basis(M.select(all_rows(shape.m), first_columns(shape.top())), shape);
}

FlagPoint standard_flag(const FlagShape& shape) { return q_flag(identity_q(static_cast<std::size_t>(shape.m)), shape); }

std::vector<Rational> tangent_vector(const QMatrix& X, const FlagPoint& F) {
  const FlagChart ch = flag_chart(F.shape, F.pivots);
  const auto n = normalized_steps(ch, F.basis);
  std::vector<QMatrix> t;
  for (int k = 0; k < ch.shape.steps(); ++k) {
    const QMatrix& nk = n[static_cast<std::size_t>(k)];
    const QMatrix xn = X * nk;
    t.push_back(xn - nk * xn.select(ch.pivot_rows(k), first_columns(static_cast<int>(nk.cols()))));
  }
  std::vector<Rational> v;
  for (const auto& [r, c] : ch.cells)
    v.push_back(t[static_cast<std::size_t>(ch.shape.block_of(c))](static_cast<std::size_t>(r),
                                                                  static_cast<std::size_t>(c)));
  return v;
}

int orbit_dimension(const std::vector<QMatrix>& generators, const FlagPoint& F) {
  if (generators.empty()) return 0;
  const FlagChart ch = flag_chart(F.shape, F.pivots);
  QMatrix a(generators.size(), ch.cells.size(), Rational(0));
  for (std::size_t g = 0; g < generators.size(); ++g) {
    if (generators[g].rows() != static_cast<std::size_t>(F.shape.m) || generators[g].cols() != generators[g].rows())
      throw ShapeError("Lie generator has the wrong size");
    const auto v = tangent_vector(generators[g], F);
    for (std::size_t j = 0; j < v.size(); ++j) a(g, j) = v[j];
  }
  return static_cast<int>(rank(a));
}

QMatrix sym3_matrix(const QMatrix& x) {
  QMatrix s(4, 4, Rational(0));
  for (int q = 0; q <= 3; ++q) {
    const auto c = static_cast<std::size_t>(q);
    s(c, c) += (3 - q) * x(0, 0) + q * x(1, 1);
    if (q < 3) s(c + 1, c) += (3 - q) * x(1, 0);
    if (q > 0) s(c - 1, c) += q * x(0, 1);
  }
  return s;
}

std::vector<QMatrix> sl2_basis() {
  QMatrix e(2, 2, Rational(0)), f(2, 2, Rational(0)), h(2, 2, Rational(0));
  e(0, 1) = 1;
  f(1, 0) = 1;
  h(0, 0) = 1;
  h(1, 1) = -1;
  return {e, f, h};
}

QMatrix embed_block(const QMatrix& x, int m, const std::vector<int>& idx) {
  QMatrix out(static_cast<std::size_t>(m), static_cast<std::size_t>(m), Rational(0));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out(static_cast<std::size_t>(idx[i]), static_cast<std::size_t>(idx[j])) = x(i, j);
  return out;
}

}  // namespace hodgejet
