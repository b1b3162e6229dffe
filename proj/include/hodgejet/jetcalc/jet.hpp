#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hodgejet/exactalg/fraction.hpp"
#include "hodgejet/jetcalc/series.hpp"

namespace hodgejet {

/// A point of J^d_r X: one truncated series per chart variable.
struct Jet {
  Chart chart;
  int d = 0;
  int r = 0;
  std::vector<QSeries> coords;

  std::vector<Rational> base_point() const;
  /// Constant terms satisfy the chart relations and avoid unit zeros.
  bool base_is_valid() const;
};

/// Jet of a polynomial arc: variable i follows coordinate_series[i].
Jet make_jet(const Chart& chart, int d, int r, std::vector<QSeries> coords);

/// f evaluated along the jet, truncated at order r.
QSeries series_compose(const MultiPoly& f, const Jet& j);
/// Throws PoleError when a denominator has vanishing constant term.
QSeries series_compose(const ChartFraction& f, const Jet& j);

/// Series inverse over the rationals; PoleError when the constant term is 0.
QSeries series_inverse(const QSeries& s);

/// Jet coordinates x_{i,alpha}: names "x[alpha]" with "alpha" as in
/// index_string, one block of binomial(d+r, d) per base variable.
std::string jet_variable_name(const std::string& base, const MultiIndex& alpha);

struct JetChartSpace {
  Chart base;
  int d = 0;
  int r = 0;
  Symbols symbols;
  Ideal ideal;
  /// Base units written in the order-zero coordinates.
  std::vector<MultiPoly> units;

  std::size_t variable(std::size_t base_var, const MultiIndex& alpha) const;
  /// Generic series x_i = sum_alpha x_{i,alpha} t^alpha over the jet table.
  std::vector<PolySeries> generic_series() const;
  nlohmann::json to_json() const;
};

JetChartSpace prolong_ideal(const Chart& base, int d, int r);

/// Coefficients with alpha_{e+1} = ... = alpha_d = 0.
Jet restrict_jet(const Jet& j, int e);
/// Drop the order-r part (projection J_r -> J_{r'}).
Jet truncate_jet(const Jet& j, int r);

/// e x e minors of the linear-part matrix [x_{i, e_a}]_{a <= e}. A jet is
/// non-degenerate in the first e disk variables iff not all minors vanish.
/// When there are fewer chart variables than e the family is empty and the
/// returned ideal has no generators: no jet qualifies, so callers must not
/// read it with the "zero J means no inequation" convention.
Ideal nondegeneracy_stratum(const JetChartSpace& space, int e);

bool is_jet_on_variety(const Jet& j, const Ideal& I);

/// JSON map variable -> {alpha-string: rational-string}.
nlohmann::json jet_to_json(const Jet& j);
/// Inverse of jet_to_json; d and r are inferred from the index strings
/// when not given (-1). Missing coefficients are zero.
Jet jet_from_json(const nlohmann::json& js, const Chart& chart, int d = -1, int r = -1);

/// Map jets between charts by composing with polynomial (or fraction)
/// coordinate functions.
std::vector<QSeries> push_forward(const std::vector<ChartFraction>& map, const Jet& j);

}  // namespace hodgejet
