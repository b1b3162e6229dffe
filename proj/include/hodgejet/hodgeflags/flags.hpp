#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hodgejet/exactalg/matrix.hpp"
#include "hodgejet/exactalg/poly.hpp"

namespace hodgejet {

/// Hodge flag shape: V has rank m and step k is spanned by the first
/// dims[k] frame vectors, dims strictly increasing.
struct FlagShape {
  int m = 0;
  std::vector<int> dims;

  void validate() const;  // throws ShapeError
  int steps() const noexcept { return static_cast<int>(dims.size()); }
  int top() const noexcept { return dims.empty() ? 0 : dims.back(); }
  /// Step (block) that column c (0-based) first appears in.
  int block_of(int column) const;
  /// Dimension of the flag variety.
  int variety_dimension() const;
  friend bool operator==(const FlagShape&, const FlagShape&) = default;
  std::string to_string() const;
};

FlagShape parse_shape(const nlohmann::json& js, int m);

/// Pivot row (0-based) for each of the first dims.back() columns; rows of a
/// block are kept sorted.
using Pivots = std::vector<int>;

/// Affine big-cell chart of the flag variety. Column c has a 1 in its pivot
/// row, zeros in the other pivot rows of its step, and free coordinates
/// y[r,c] (1-based) in the remaining rows.
struct FlagChart {
  FlagShape shape;
  Pivots pivots;
  Symbols symbols;
  std::vector<std::pair<int, int>> cells;  // (row, column) per coordinate, 0-based

  std::string id() const;
  /// Pivot rows of the first dims[k] columns.
  std::vector<std::size_t> pivot_rows(int step) const;
  /// Generic point: m x top matrix in the chart coordinates.
  Matrix<MultiPoly> basis_matrix() const;
  /// Flag point with the given chart coordinates.
  QMatrix basis_at(std::span<const Rational> coords) const;
  bool contains(const QMatrix& m) const;
  /// Chart coordinates of the flag spanned by the columns of m (m x >= top).
  /// Throws Error when the flag is outside the chart.
  std::vector<Rational> coordinates(const QMatrix& m) const;
};

/// Pivots given per column (1-based rows) or as nested per-step row sets.
Pivots parse_pivots(const nlohmann::json& js, const FlagShape& shape);
nlohmann::json pivots_to_json(const Pivots& p);

FlagChart flag_chart(const FlagShape& shape, Pivots pivots);
/// Every chart of the atlas (one per pivot chain).
std::vector<FlagChart> flag_atlas(const FlagShape& shape);
/// The chart containing the standard flag.
FlagChart standard_chart(const FlagShape& shape);

/// A point of the flag variety in canonical form: greedy lowest pivots,
/// basis in chart normal form.
struct FlagPoint {
  FlagShape shape;
  Pivots pivots;
  QMatrix basis;  // m x top

  std::vector<Rational> coordinates() const;
  friend bool operator==(const FlagPoint& a, const FlagPoint& b) {
    return a.shape == b.shape && a.pivots == b.pivots && a.basis == b.basis;
  }
};

/// Step k spanned by the first dims[k] columns of M. Throws Error when M is
/// singular.
FlagPoint q_flag(const QMatrix& M, const FlagShape& shape);
/// Canonical form of the flag spanned by the columns of a full-rank m x top
/// matrix.
FlagPoint flag_from_basis(const QMatrix& basis, const FlagShape& shape);
FlagPoint standard_flag(const FlagShape& shape);

/// Dimension of the orbit through F of the group with the given Lie algebra:
/// rank of the induced tangent vectors in a chart at F.
int orbit_dimension(const std::vector<QMatrix>& generators, const FlagPoint& F);

/// Tangent vector at F (in F's canonical chart) of the one-parameter
/// family exp(eps X) F.
std::vector<Rational> tangent_vector(const QMatrix& X, const FlagPoint& F);

/// sl2 acting on Sym^3 of the standard representation, basis w1^(3-q) w2^q.
QMatrix sym3_matrix(const QMatrix& x);
/// Basis E, F, H of sl2.
std::vector<QMatrix> sl2_basis();
/// Embed an n x n block into an m x m zero matrix along the given indices.
QMatrix embed_block(const QMatrix& x, int m, const std::vector<int>& indices);

}  // namespace hodgejet
