#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgejet/exactalg/constructible.hpp"
#include "hodgejet/hodgeflags/flags.hpp"

namespace hodgejet {

/// W intersected with one chart: an ideal in the chart coordinates. A unit
/// ideal records that W misses the chart.
struct ChartIdeal {
  Pivots pivots;
  Ideal ideal;
};

/// Representative W of a type of subvarieties of the flag variety.
struct TypeRep {
  std::string name;
  FlagShape shape;
  int dim = 0;
  std::vector<ChartIdeal> charts;
  std::vector<QMatrix> lie_generators;
  bool hodge_theoretic = false;
  /// W is a single orbit of the group generated by lie_generators through
  /// the standard flag; loci may then be built on the standard chart only.
  bool homogeneous = false;
  std::vector<std::string> leq;

  FlagChart chart(std::size_t i) const { return flag_chart(shape, charts.at(i).pivots); }
  /// Index of the chart ideal over the given pivots, if listed.
  std::optional<std::size_t> find_chart(const Pivots& p) const;
};

struct Catalog {
  FlagShape shape;
  std::vector<TypeRep> types;
  std::string completeness;

  const TypeRep& find(const std::string& name) const;
};

nlohmann::json type_to_json(const TypeRep& t);
TypeRep type_from_json(const nlohmann::json& js, const FlagShape& shape, const std::string& where = "");
nlohmann::json catalog_to_json(const Catalog& c);
Catalog catalog_from_json(const nlohmann::json& js, const FlagShape& shape);

/// Whether the flag lies in W, decided in any listed chart containing it.
/// Returns nullopt when no listed chart contains the flag.
std::optional<bool> type_contains(const TypeRep& t, const FlagPoint& F);

/// Is some translate g.W1 contained in W2? False immediately when
/// dim W1 > dim W2.
Tri type_leq(const TypeRep& w1, const TypeRep& w2, const Budget& budget = Budget::from_env());

struct CatalogReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  nlohmann::json to_json() const;
};

CatalogReport catalog_validate(const Catalog& c, const Budget& budget = Budget::from_env());

/// Closure of the image of a rational parametrization in every chart of the
/// atlas (unit ideals dropped). `basis` is an m x top matrix of polynomials in
/// the parameters.
std::vector<ChartIdeal> chart_ideals_from_parametrization(const FlagShape& shape,
                                                          const Matrix<MultiPoly>& basis,
                                                          const Budget& budget = Budget::from_env());

Catalog legendre_catalog();
Catalog product_legendre_catalog();
Catalog sym3_catalog();

}  // namespace hodgejet
