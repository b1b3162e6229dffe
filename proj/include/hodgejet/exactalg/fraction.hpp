#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hodgejet/exactalg/ideal.hpp"
#include "hodgejet/exactalg/matrix.hpp"

namespace hodgejet {

/// An affine chart: coordinates, defining relations, and the polynomials
/// declared invertible on it.
struct Chart {
  Symbols symbols;
  Ideal relations;
  std::vector<MultiPoly> units;

  std::size_t dimension_hint() const { return symbols ? symbols->size() : 0; }
};

using UnitList = std::shared_ptr<const std::vector<MultiPoly>>;

/// Element of the chart's coordinate ring localized at its declared units:
/// numerator / prod(units[i] ^ powers[i]). Denominator exponents grow
/// additively under products and derivatives, and are cancelled whenever a
/// unit divides the numerator.
class ChartFraction {
 public:
  ChartFraction() = default;
  ChartFraction(MultiPoly numerator, std::vector<int> powers, UnitList units);
  static ChartFraction polynomial(MultiPoly p, UnitList units);

  const MultiPoly& numerator() const noexcept { return num_; }
  const std::vector<int>& powers() const noexcept { return pow_; }
  const UnitList& units() const noexcept { return units_; }
  MultiPoly denominator() const;
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const;

  ChartFraction operator-() const;
  friend ChartFraction operator+(const ChartFraction& a, const ChartFraction& b);
  friend ChartFraction operator-(const ChartFraction& a, const ChartFraction& b);
  friend ChartFraction operator*(const ChartFraction& a, const ChartFraction& b);
  friend bool operator==(const ChartFraction& a, const ChartFraction& b);

  ChartFraction derivative(std::size_t var) const;
  /// Throws PoleError when a denominator unit vanishes at the point.
  Rational evaluate(std::span<const Rational> point) const;

  std::string to_string() const;

 private:
  void normalize();
  void adopt(const UnitList& u);

  MultiPoly num_;
  std::vector<int> pow_;
  UnitList units_;
};

/// Parse a rational expression whose denominators factor into declared units.
/// Throws InputError naming the offending factor otherwise.
ChartFraction parse_fraction(std::string_view text, const Symbols& symbols, const UnitList& units);

using FractionMatrix = Matrix<ChartFraction>;

enum class RankStrategy { Symbolic, Sampled, Certified };

struct RankResult {
  std::size_t rank = 0;
  /// Set when a sampled point reached the symbolic rank.
  bool certified = false;
  std::optional<std::size_t> sample_rank;
  std::vector<Rational> sample_point;
};

/// Rank at a generic point of the chart. Symbolic rank is computed over the
/// fraction field (fraction-free elimination for relation-free charts, minors
/// modulo the relations otherwise); sampling evaluates at a random rational
/// point avoiding unit zeros. Throws SamplingError after bounded retries.
RankResult generic_rank(const FractionMatrix& m, const Chart& chart, RankStrategy strategy,
                        std::uint64_t seed = 1);

/// Rank over Q(x) of a polynomial matrix (fraction-free Bareiss).
std::size_t symbolic_rank(Matrix<MultiPoly> m);

}  // namespace hodgejet
