#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgejet/exactalg/fraction.hpp"
#include "hodgejet/hodgeflags/flags.hpp"
#include "hodgejet/jetcalc/jet.hpp"

namespace hodgejet {

/// Connection on the trivial bundle over one affine chart of S, written in a
/// filtration-compatible frame w^1..w^m: nabla w^i = sum_j c_ij,l w^j dz_l.
/// Flat frames b^k = sum_i f_ik w^i satisfy d_l f = -C_l^T f.
struct ConnectionData {
  Chart chart;
  UnitList units;
  FlagShape shape;
  std::vector<FractionMatrix> c;  // one m x m matrix per chart variable
  std::optional<QMatrix> polarization;
  std::optional<bool> quasi_finite;
  /// Result of validate_connection; solvers refuse non-flat connections.
  bool flat = true;

  int m() const noexcept { return shape.m; }
  std::size_t n() const noexcept { return c.size(); }
};

/// Builds the connection and runs the flatness check.
ConnectionData make_connection(Chart chart, FlagShape shape, std::vector<FractionMatrix> c);

/// {variables, relations, units, m, filtration, c: {var: [[...]]}, Q?, quasi_finite?}.
/// Throws InputError with a JSON pointer on malformed input, including c
/// entries whose denominators are not products of declared units.
ConnectionData connection_from_json(const nlohmann::json& js);
nlohmann::json connection_to_json(const ConnectionData& conn);

/// Conjugate by a constant change of frame w' = G w: C'_l = G C_l G^-1.
ConnectionData gauge_transform(const ConnectionData& conn, const QMatrix& G);

struct ConnectionReport {
  bool flat = true;
  bool transversal = true;
  bool transversality_checked = false;
  std::vector<std::string> failures;

  bool valid() const noexcept { return flat && transversal; }
  nlohmann::json to_json() const;
};

/// Mixed-partial compatibility d_a C_b^T - d_b C_a^T = C_b^T C_a^T - C_a^T C_b^T
/// modulo the chart relations, and optionally the transversality pattern
/// (c_ij = 0 when i <= i_k < i_{k+1} < j).
ConnectionReport validate_connection(const ConnectionData& conn, bool check_transversality = true,
                                     const Budget& budget = Budget::from_env());

/// Matrices Xi_w with d_{l1} ... d_{le} f = Xi_w f for every flat frame f,
/// memoized on prefixes. Words are 0-based variable indices.
class XiTable {
 public:
  explicit XiTable(const ConnectionData& conn);
  const FractionMatrix& get(const std::vector<int>& word);

 private:
  const ConnectionData* conn_;
  std::map<std::vector<int>, FractionMatrix> memo_;
  std::mutex mutex_;
};

/// Xi_w as above, computed without memoization.
FractionMatrix xi_polynomials(const ConnectionData& conn, const std::vector<int>& word);

template <class T>
using SeriesMatrix = Matrix<TruncSeries<T>>;

/// Coefficient ring for the generic solver.
template <class T>
struct SeriesRing {
  T zero;
  T one;
  std::function<T(const Rational&)> from;
};

/// B_a = -sum_l C_l^T(z(t)) dz_l/dt_a for each disk variable a. The
/// caller supplies the inverse of each unit's constant term along z.
template <class T>
std::vector<SeriesMatrix<T>> pulled_back_connection(const ConnectionData& conn,
                                                    const std::vector<TruncSeries<T>>& z,
                                                    const std::vector<T>& unit_inverses,
                                                    const SeriesRing<T>& R) {
  const int d = z.at(0).d(), r = z.at(0).r();
  const auto m = static_cast<std::size_t>(conn.m());
  std::vector<TruncSeries<T>> inv;
  for (std::size_t i = 0; i < conn.units->size(); ++i) {
    const auto u = compose_poly<T>((*conn.units)[i], z, R.from, d, r, R.zero);
    inv.push_back(u.inverse_given(unit_inverses.at(i), R.one));
  }
  std::vector<std::vector<TruncSeries<T>>> inv_pow(inv.size());
  auto power = [&](std::size_t i, int e) -> const TruncSeries<T>& {
    auto& pw = inv_pow[i];
    if (pw.empty()) pw.push_back(TruncSeries<T>::constant(d, r, R.one, R.zero));
    while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * inv[i]);
    return pw[static_cast<std::size_t>(e)];
  };
  std::vector<SeriesMatrix<T>> composed;
  for (const auto& cl : conn.c) {
    SeriesMatrix<T> s(m, m, TruncSeries<T>(d, r, R.zero));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const ChartFraction& q = cl(i, j);
        if (q.is_zero()) continue;
        auto v = compose_poly<T>(q.numerator(), z, R.from, d, r, R.zero);
        for (std::size_t k = 0; k < q.powers().size(); ++k)
          if (q.powers()[k]) v = v * power(k, q.powers()[k]);
        s(j, i) = v;  // transposed
      }
    composed.push_back(std::move(s));
  }
  std::vector<SeriesMatrix<T>> out;
  for (int a = 0; a < d; ++a) {
    SeriesMatrix<T> b(m, m, TruncSeries<T>(d, r, R.zero));
    for (std::size_t l = 0; l < conn.n(); ++l) {
      const auto dz = z[l].derivative(a);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b(i, j) = b(i, j) - composed[l](i, j) * dz;
    }
    out.push_back(std::move(b));
  }
  return out;
}

/// Degree-by-degree solution of d_{t_a} F = B_a F with F(0) = P. Each
/// coefficient is read off the equation for the first (or, with
/// `last_variable_first`, the last) disk variable it involves.
template <class T>
SeriesMatrix<T> solve_frame(const std::vector<SeriesMatrix<T>>& B, const Matrix<T>& P, int d, int r,
                            const SeriesRing<T>& R, bool last_variable_first = false) {
  const auto m = P.rows();
  const auto alg = DiskAlgebra::get(d, r);
  SeriesMatrix<T> F(m, m, TruncSeries<T>(d, r, R.zero));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) F(i, k)[0] = P(i, k);
  for (std::size_t idx = 1; idx < alg->size(); ++idx) {
    const MultiIndex& alpha = alg->basis[idx];
    int a = -1;
    for (int v = 0; v < d; ++v)
      if (alpha[static_cast<std::size_t>(v)] > 0 && (a < 0 || last_variable_first)) a = v;
    MultiIndex beta = alpha;
    --beta[static_cast<std::size_t>(a)];
    // Pairs (delta, gamma) with delta + gamma = beta.
    std::vector<std::pair<std::size_t, std::size_t>> splits;
    for (std::size_t g = 0; g < idx; ++g) {
      MultiIndex delta = beta;
      bool ok = true;
      for (int v = 0; v < d && ok; ++v) {
        delta[static_cast<std::size_t>(v)] -= alg->basis[g][static_cast<std::size_t>(v)];
        ok = delta[static_cast<std::size_t>(v)] >= 0;
      }
      if (ok) splits.emplace_back(alg->position(delta), g);
    }
    const T scale = R.from(Rational(1, alpha[static_cast<std::size_t>(a)]));
    const auto& Ba = B[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) {
        T acc = R.zero;
        for (std::size_t j = 0; j < m; ++j)
          for (const auto& [dp, g] : splits) acc = acc + Ba(i, j)[dp] * F(j, k)[g];
        F(i, k)[idx] = scale * acc;
      }
  }
  return F;
}

/// Inverse of a series matrix whose constant term has inverse `c0_inverse`.
template <class T>
SeriesMatrix<T> series_matrix_inverse(const SeriesMatrix<T>& M, const Matrix<T>& c0_inverse, const SeriesRing<T>& R) {
  const auto n = M.rows();
  const int d = M(0, 0).d(), r = M(0, 0).r();
  SeriesMatrix<T> X(n, n, TruncSeries<T>(d, r, R.zero)), I(n, n, TruncSeries<T>(d, r, R.zero));
  for (std::size_t i = 0; i < n; ++i) {
    I(i, i) = TruncSeries<T>::constant(d, r, R.one, R.zero);
    for (std::size_t j = 0; j < n; ++j) X(i, j) = TruncSeries<T>::constant(d, r, c0_inverse(i, j), R.zero);
  }
  const SeriesMatrix<T> U = I - M * X;  // nilpotent
  SeriesMatrix<T> acc = I, power = I;
  for (int k = 1; k <= r; ++k) {
    power = power * U;
    acc = acc + power;
  }
  return X * acc;
}

/// Flat frame along a rational jet with initial condition P.
struct FrameJet {
  SeriesMatrix<Rational> f;
  Jet jet;
  QMatrix initial;
};

/// Throws PoleError when a unit vanishes at the base point and Error when
/// the connection failed its flatness check.
FrameJet flat_frame_jet(const ConnectionData& conn, const Jet& j, const QMatrix& P);

/// Chart jet of q_flag(A) for a matrix series A, in the chart whose pivot
/// minors have the given constant-term inverses (one matrix per step).
template <class T>
std::vector<TruncSeries<T>> flag_chart_jet(const SeriesMatrix<T>& A, const FlagChart& chart,
                                           const std::vector<Matrix<T>>& pivot_inverses, const SeriesRing<T>& R) {
  const auto m = static_cast<std::size_t>(chart.shape.m);
  std::vector<std::size_t> all_rows(m);
  for (std::size_t i = 0; i < m; ++i) all_rows[i] = i;
  std::vector<TruncSeries<T>> out(chart.cells.size());
  for (int k = 0; k < chart.shape.steps(); ++k) {
    std::vector<std::size_t> cols(static_cast<std::size_t>(chart.shape.dims[static_cast<std::size_t>(k)]));
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = c;
    const auto block = A.select(all_rows, cols);
    const auto inv = series_matrix_inverse(block.select(chart.pivot_rows(k), cols), pivot_inverses.at(static_cast<std::size_t>(k)), R);
    const auto N = block * inv;
    for (std::size_t v = 0; v < chart.cells.size(); ++v) {
      const auto [row, col] = chart.cells[v];
      if (chart.shape.block_of(col) == k) out[v] = N(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
    }
  }
  return out;
}

/// Representative of the period jet: the chart jet of q_flag(A) with
/// A = f^-1 for the flat frame with f(0) = Id.
struct PeriodJetRep {
  FlagChart chart;
  std::vector<QSeries> coords;
  SeriesMatrix<Rational> A;

  nlohmann::json to_json() const;
};

PeriodJetRep period_jet(const ConnectionData& conn, const Jet& j);

/// Matrix of rational series as JSON: rows of {alpha: value} maps.
nlohmann::json series_matrix_to_json(const SeriesMatrix<Rational>& M);

}  // namespace hodgejet
