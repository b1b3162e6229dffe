#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "hodgejet/gaussmanin/connection.hpp"

namespace hodgejet {

/// p-adic number u * p^v with u a unit known modulo p^N (relative precision
/// N). Two degenerate states: exact zero, and a bounded zero O(p^v) left by
/// a cancellation that consumed every known digit. Default-constructed
/// values are exact zero and adopt the prime of whatever they meet.
class Padic {
 public:
  Padic() = default;
  static Padic from_rational(const Rational& q, long p, int precision);
  static Padic bounded_zero(long p, int valuation);

  long prime() const noexcept { return p_; }
  bool is_exact_zero() const noexcept { return kind_ == Kind::Zero; }
  bool is_bounded_zero() const noexcept { return kind_ == Kind::Bounded; }
  /// Exact valuation, or the lower bound for a bounded zero; nullopt for 0.
  std::optional<int> valuation() const;
  int relative_precision() const noexcept { return n_; }
  const Integer& unit() const noexcept { return u_; }

  Padic operator-() const;
  friend Padic operator+(const Padic& a, const Padic& b);
  friend Padic operator-(const Padic& a, const Padic& b) { return a + (-b); }
  friend Padic operator*(const Padic& a, const Padic& b);
  /// Scaling by an exact rational (used by formal derivatives).
  friend Padic operator*(const Padic& a, const Rational& q);
  /// Throws PrecisionError for zeros.
  Padic inverse() const;

  /// Does the rational lie in this p-adic ball?
  bool agrees_with(const Rational& q) const;
  std::string to_string() const;

 private:
  enum class Kind { Zero, Value, Bounded };
  Kind kind_ = Kind::Zero;
  long p_ = 0;
  int v_ = 0;
  int n_ = 0;
  Integer u_;
};

inline Padic zero_like(const Padic&) { return Padic(); }

/// v_p of a nonzero rational.
int padic_valuation(const Rational& q, long p);

struct PadicFrame {
  long p = 0;
  int precision = 0;
  std::vector<Rational> base;
  SeriesMatrix<Padic> f;
};

/// Flat frame on the residue disk z = s0 + t of a chart without relations
/// (d = number of chart variables). Throws BadReductionError when a unit
/// is not a p-adic unit at s0, s0 or a coefficient is not p-integral, or
/// P is not invertible over Z_p.
PadicFrame padic_frame(const ConnectionData& conn, long p, const std::vector<Rational>& s0, const QMatrix& P, int r,
                       int precision);

/// Per total degree: minimum valuation over all entries, nullopt when every
/// coefficient of that degree is exactly zero.
std::map<int, std::optional<int>> padic_valuation_report(const PadicFrame& f);

/// Report as JSON: {"degree": valuation or "+inf"}, plus the classical bound
/// v >= -floor(e/(p-1)) and whether every degree meets it.
nlohmann::json padic_report_json(const PadicFrame& f);

/// The identity arc s0 + t on a chart with n variables, as a rational jet.
Jet coordinate_jet(const Chart& chart, const std::vector<Rational>& s0, int r);

}  // namespace hodgejet
