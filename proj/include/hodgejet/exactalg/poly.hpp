#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hodgejet {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical rational text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);

/// Ordered list of variable names shared by every polynomial of a ring.
class SymbolTable {
 public:
  explicit SymbolTable(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  // Throws InputError for unknown names.
  std::size_t index(std::string_view name) const;

  bool operator==(const SymbolTable& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

using Symbols = std::shared_ptr<const SymbolTable>;

Symbols make_symbols(std::vector<std::string> names);
bool same_symbols(const Symbols& a, const Symbols& b);

using Exponent = std::uint16_t;
using Monomial = std::vector<Exponent>;

int monomial_degree(const Monomial& m);
/// Graded reverse lexicographic comparison; returns <0, 0, >0.
int grevlex_compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept in strictly decreasing grevlex order with nonzero
/// coefficients, so two equal polynomials have identical term vectors and
/// identical text. A polynomial without a symbol table is a constant; it
/// adopts the table of whatever it is combined with.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(Symbols symbols);
  MultiPoly(Symbols symbols, const Rational& constant);

  static MultiPoly constant(const Rational& c);
  static MultiPoly variable(Symbols symbols, std::size_t index);
  static MultiPoly variable(Symbols symbols, std::string_view name);
  static MultiPoly from_terms(Symbols symbols, std::vector<Term> terms);

  const Symbols& symbols() const noexcept { return symbols_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  const Term& leading() const { return terms_.front(); }
  int total_degree() const;
  int degree_in(std::size_t var) const;
  bool depends_on(std::size_t var) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const MultiPoly& other);
  MultiPoly& operator*=(const Rational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly pow(unsigned e) const;
  MultiPoly derivative(std::size_t var) const;
  /// Scale so the leading coefficient is 1.
  MultiPoly monic() const;
  /// Multiply by term `c * mono`.
  MultiPoly mul_term(const Monomial& mono, const Rational& c) const;

  Rational evaluate(std::span<const Rational> values) const;
  /// Replace variable i by images[i]; images share `target`'s table.
  MultiPoly substitute(std::span<const MultiPoly> images, const Symbols& target) const;
  /// Re-express over another table containing every variable that occurs.
  MultiPoly rebased(const Symbols& target) const;

  std::string to_string() const;

  /// Evaluate into any commutative ring R given a conversion from Rational.
  template <class R, class FromRational>
  R evaluate_in(std::span<const R> values, FromRational&& from, const R& zero) const;

 private:
  void adopt(const Symbols& other);
  void canonicalize();

  Symbols symbols_;
  std::vector<Term> terms_;
};

MultiPoly parse_poly(std::string_view text, const Symbols& symbols);

struct DivisionResult {
  MultiPoly quotient;
  MultiPoly remainder;
};

/// Multivariate division by a single polynomial (grevlex).
DivisionResult divide(const MultiPoly& f, const MultiPoly& g);
std::optional<MultiPoly> exact_divide(const MultiPoly& f, const MultiPoly& g);

template <class R, class FromRational>
R MultiPoly::evaluate_in(std::span<const R> values, FromRational&& from, const R& zero) const {
  R acc = zero;
  if (terms_.empty()) return acc;
  const std::size_t n = symbols_ ? symbols_->size() : 0;
  std::vector<std::vector<R>> powers(n);
  for (const Term& t : terms_) {
    R term = from(t.coeff);
    for (std::size_t v = 0; v < n; ++v) {
      const Exponent e = t.mono[v];
      if (e == 0) continue;
      auto& pw = powers[v];
      if (pw.empty()) pw.push_back(values[v]);
      while (pw.size() < e) pw.push_back(pw.back() * values[v]);
      term = term * pw[e - 1];
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace hodgejet
