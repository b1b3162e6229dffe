#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hodgejet/errors.hpp"
#include "hodgejet/exactalg/poly.hpp"

namespace hodgejet {

using MultiIndex = std::vector<int>;

int index_weight(const MultiIndex& a);
/// "1,0" style text; empty string for d = 0.
std::string index_string(const MultiIndex& a);
MultiIndex parse_index(std::string_view text, std::size_t d);

/// All alpha with |alpha| <= r, graded, lexicographically descending within
/// each degree: (0,0), (1,0), (0,1), (2,0), ...
std::vector<MultiIndex> disk_basis(int d, int r);

/// Cached bookkeeping for A^d_r: basis, index lookup and the product table.
struct DiskAlgebra {
  int d = 0;
  int r = 0;
  std::vector<MultiIndex> basis;
  /// (i, j, k): basis[i] + basis[j] = basis[k], all with weight <= r.
  std::vector<std::array<std::uint32_t, 3>> products;

  std::size_t size() const noexcept { return basis.size(); }
  /// Position of alpha, or npos if |alpha| > r.
  std::size_t position(const MultiIndex& alpha) const;
  std::size_t unit_index(int var) const;  // position of e_var (requires r >= 1)

  static std::shared_ptr<const DiskAlgebra> get(int d, int r);

 private:
  std::vector<std::size_t> lookup_;  // dense table over (r+1)^d
  std::size_t flat(const MultiIndex& a) const;
  friend std::shared_ptr<const DiskAlgebra> make_disk(int d, int r);
};

/// Zero in the ring of x. Types whose x - x is not an exact zero (inexact
/// numbers) overload this next to their definition.
template <class T>
T zero_like(const T& x) {
  return x - x;
}

/// Element of A^d_r = R[t_1..t_d]/(t)^{r+1} with coefficients in T. T()
/// must behave as zero under + and *.
template <class T>
class TruncSeries {
 public:
  TruncSeries() = default;
  TruncSeries(int d, int r, const T& zero = T())
      : alg_(DiskAlgebra::get(d, r)), c_(alg_->size(), zero) {}

  static TruncSeries constant(int d, int r, const T& c, const T& zero = T()) {
    TruncSeries s(d, r, zero);
    s.c_[0] = c;
    return s;
  }

  int d() const noexcept { return alg_->d; }
  int r() const noexcept { return alg_->r; }
  const DiskAlgebra& algebra() const noexcept { return *alg_; }
  std::size_t size() const noexcept { return c_.size(); }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<T>& coefficients() const noexcept { return c_; }
  const T& coefficient(const MultiIndex& a) const { return c_.at(alg_->position(a)); }
  T& coefficient(const MultiIndex& a) { return c_.at(alg_->position(a)); }
  const T& constant_term() const { return c_[0]; }

  TruncSeries operator-() const {
    TruncSeries s = *this;
    for (auto& x : s.c_) x = -x;
    return s;
  }
  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) {
    a.check(b);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] = a.c_[i] + b.c_[i];
    return a;
  }
  friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) {
    a.check(b);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] = a.c_[i] - b.c_[i];
    return a;
  }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    a.check(b);
    TruncSeries p(a.d(), a.r(), zero_like(a.c_[0]));
    for (const auto& [i, j, k] : a.alg_->products) p.c_[k] = p.c_[k] + a.c_[i] * b.c_[j];
    return p;
  }
  friend TruncSeries operator*(const T& s, TruncSeries a) {
    for (auto& x : a.c_) x = s * x;
    return a;
  }
  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.alg_->d == b.alg_->d && a.alg_->r == b.alg_->r && a.c_ == b.c_;
  }

  /// Formal derivative in t_var; the top-degree part becomes zero.
  TruncSeries derivative(int var) const {
    TruncSeries out(d(), r(), zero_like(c_[0]));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      MultiIndex a = alg_->basis[i];
      if (a[var] == 0) continue;
      const int k = a[var]--;
      out.c_[alg_->position(a)] = c_[i] * Rational(k);
    }
    return out;
  }

  /// Copy into a smaller disk/order: coefficients outside are dropped.
  TruncSeries restrict_to(int e, int r2) const {
    TruncSeries out(e, r2, zero_like(c_[0]));
    for (std::size_t i = 0; i < out.c_.size(); ++i) {
      MultiIndex a = out.alg_->basis[i];
      a.resize(static_cast<std::size_t>(d()), 0);
      const std::size_t p = alg_->position(a);
      if (p != static_cast<std::size_t>(-1)) out.c_[i] = c_[p];
    }
    return out;
  }

  /// 1/s via the truncated geometric series around the constant term; the
  /// caller supplies the inverse of that constant and the unit.
  TruncSeries inverse_given(const T& inv_c0, const T& one) const {
    TruncSeries u = inv_c0 * (*this);
    u.c_[0] = zero_like(u.c_[0]);  // u = s/c0 - 1, nilpotent
    TruncSeries acc = constant(d(), r(), one, zero_like(c_[0]));
    TruncSeries power = acc;
    for (int k = 1; k <= r(); ++k) {
      power = power * u;
      acc = (k % 2) ? acc - power : acc + power;
    }
    return inv_c0 * acc;
  }

 private:
  void check(const TruncSeries& b) const {
    if (alg_->d != b.alg_->d || alg_->r != b.alg_->r) throw ShapeError("series shape mismatch");
  }

  std::shared_ptr<const DiskAlgebra> alg_;
  std::vector<T> c_;
};

using QSeries = TruncSeries<Rational>;
using PolySeries = TruncSeries<MultiPoly>;

/// Evaluate a polynomial on series arguments (one per table variable).
template <class T>
TruncSeries<T> compose_poly(const MultiPoly& f, const std::vector<TruncSeries<T>>& args,
                            const std::function<T(const Rational&)>& from, int d, int r,
                            const T& zero) {
  TruncSeries<T> acc(d, r, zero);
  const std::size_t n = f.symbols() ? f.symbols()->size() : 0;
  std::vector<std::vector<TruncSeries<T>>> powers(n);
  for (const Term& t : f.terms()) {
    TruncSeries<T> term = TruncSeries<T>::constant(d, r, from(t.coeff), zero);
    for (std::size_t v = 0; v < n; ++v) {
      const unsigned e = v < t.mono.size() ? t.mono[v] : 0;
      if (!e) continue;
      auto& pw = powers[v];
      if (pw.empty()) pw.push_back(args.at(v));
      while (pw.size() < e) pw.push_back(pw.back() * args[v]);
      term = term * pw[e - 1];
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace hodgejet
