#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgejet/exactalg/constructible.hpp"
#include "hodgejet/gaussmanin/connection.hpp"
#include "hodgejet/hodgeflags/catalog.hpp"

namespace hodgejet {

/// Exact period matrix A = f^-1 along the generic jet of S: entries are
/// polynomials in the jet coordinates and the unit inverses w_i.
struct SymbolicPeriod {
  JetChartSpace space;
  Symbols symbols;  // jet coordinates, then w_1..w_k
  std::vector<MultiPoly> unit_relations;  // w_i * unit_i(x[0]) - 1
  SeriesMatrix<MultiPoly> A;

  std::size_t jet_count() const { return space.symbols->size(); }
};

std::shared_ptr<const SymbolicPeriod> symbolic_period(const ConnectionData& conn, int dprime, int r);

/// A named block of constraints. Equation blocks must vanish; a family block
/// means "not every member vanishes".
struct Constraint {
  std::string tag;
  Ideal ideal;
};

/// Variable positions of one stratum, for building points and substitutions.
struct StratumLayout {
  int dprime = 0;
  int r = 0;
  std::size_t jet_count = 0;
  std::size_t unit_count = 0;
  /// g(i, j) -> variable index, npos for entries fixed to zero.
  Matrix<std::size_t> g;
  std::size_t u = 0;
  /// n[k][(row, q)] -> one variable per disk basis element; rows outside the
  /// step's pivots, q < dims[k].
  std::vector<std::vector<std::pair<std::pair<int, int>, std::vector<std::size_t>>>> n;
};

/// System of one Ľ-chart. The flag of g*A is written as N_k = span of the
/// first i_k columns in normal form against the chart's pivots, so no
/// pivot-minor inverse is needed: g invertible and A(0) = Id force those
/// minors to be invertible.
struct LocusStratum {
  FlagChart chart;
  /// g is restricted to the stabilizer of the standard flag.
  bool parabolic = false;
  Symbols symbols;
  StratumLayout layout;
  std::vector<Constraint> equations;
  std::vector<Constraint> families;

  Ideal ideal() const;
  std::vector<Ideal> family_ideals() const;
  /// Equation and family blocks whose tag is listed.
  Ideal ideal_of(const std::vector<std::string>& tags) const;
  std::vector<Ideal> families_of(const std::vector<std::string>& tags) const;
};

/// Union over strata: the locus is nonempty iff some stratum is consistent.
struct LocusSystem {
  std::string type;
  int dprime = 0;
  int r = 0;
  int e = -1;  // -1 for a bare T-locus
  std::vector<LocusStratum> strata;

  nlohmann::json to_json(bool with_polynomials = false) const;
};

/// T-locus of W in J^{d'}_r S. Homogeneous types use the standard chart with
/// g in the standard-flag stabilizer; other types use every listed chart.
LocusSystem t_locus_system(const ConnectionData& conn, const TypeRep& W, int dprime, int r);

/// T^{d+1}_r(C) with the rank-e family on the first e disk variables of the
/// flag jet and the rank-(d+1) family on the base jet's linear part.
LocusSystem k_system(const ConnectionData& conn, const TypeRep& C, int e, int d, int r);

enum class CellStatus { Empty, Nonempty, Unknown };
std::string to_string(CellStatus s);

struct EmptinessResult {
  CellStatus status = CellStatus::Unknown;
  /// Per stratum: the certifying basis (or a budget note).
  std::vector<std::string> certificates;
  std::string note;
};

/// Empty iff every stratum is inconsistent; a budget stop gives unknown.
EmptinessResult k_emptiness(const LocusSystem& sys, const Budget& budget = Budget::from_env());

/// The point of a stratum determined by a rational jet of S and a group
/// element g. nullopt when g or the jet does not fit the stratum.
std::optional<std::vector<Rational>> stratum_point(const LocusStratum& st, const ConnectionData& conn, const Jet& jet,
                                                   const QMatrix& g);

/// Exact check that the point satisfies every equation and family.
bool satisfies(const LocusStratum& st, std::span<const Rational> point);

/// Substitute the jet coordinates and unit inverses of a rational jet. The
/// base non-degeneracy family is decided on the spot and dropped.
LocusSystem fix_jet(const LocusSystem& sys, const Jet& jet);

}  // namespace hodgejet
