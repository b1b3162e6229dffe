#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hodgejet/errors.hpp"
#include "hodgejet/exactalg/poly.hpp"

namespace hodgejet {

/// Dense row-major matrix over any ring with value semantics.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<T>& data() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, data_.empty() ? T() : data_[0]);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  /// Submatrix on the listed rows and columns.
  Matrix select(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    Matrix s(rs.size(), cs.size(), data_.empty() ? T() : data_[0]);
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) s(i, j) = (*this)(rs[i], cs[j]);
    return s;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("matrix product dimension mismatch");
    Matrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < b.cols_; ++j) {
        T acc = a(i, 0) * b(0, j);
        for (std::size_t k = 1; k < a.cols_; ++k) acc = acc + a(i, k) * b(k, j);
        p(i, j) = acc;
      }
    }
    return p;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix s = a;
    for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] = s.data_[i] + b.data_[i];
    return s;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix s = a;
    for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] = s.data_[i] - b.data_[i];
    return s;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = f((*this)(r, c));
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;

std::size_t rank(QMatrix m);
Rational determinant(QMatrix m);
/// Throws Error for singular input.
QMatrix inverse(const QMatrix& m);
/// Basis of the right kernel, one column per vector.
QMatrix kernel(const QMatrix& m);
QMatrix identity_q(std::size_t n);

/// Determinant by cofactor expansion over any commutative ring; used for
/// small symbolic matrices (m <= 4).
template <class T>
T determinant_expand(const Matrix<T>& m, const T& zero) {
  const std::size_t n = m.rows();
  if (n == 0) return zero;
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  T acc = zero;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::size_t> rs, cs;
    for (std::size_t i = 1; i < n; ++i) rs.push_back(i);
    for (std::size_t j = 0; j < n; ++j)
      if (j != c) cs.push_back(j);
    T minor = determinant_expand(m.select(rs, cs), zero);
    T term = m(0, c) * minor;
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

/// Classical adjugate: adj(M) * M = det(M) * I.
template <class T>
Matrix<T> adjugate(const Matrix<T>& m, const T& zero, const T& one) {
  const std::size_t n = m.rows();
  Matrix<T> adj(n, n, zero);
  if (n == 1) {
    adj(0, 0) = one;
    return adj;
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::size_t> rs, cs;
      for (std::size_t i = 0; i < n; ++i)
        if (i != r) rs.push_back(i);
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) cs.push_back(j);
      T minor = determinant_expand(m.select(rs, cs), zero);
      adj(c, r) = ((r + c) % 2 == 0) ? minor : zero - minor;
    }
  }
  return adj;
}

/// All k-element subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k);

}  // namespace hodgejet
