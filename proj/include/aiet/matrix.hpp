#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aiet/error.hpp"
#include "aiet/scalar.hpp"

namespace aiet {

/// Dense row-major matrix over any scalar kind.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t d) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw Error(ErrorCode::malformed_input, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw Error(ErrorCode::malformed_input, "dimension mismatch in matrix-vector product");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::malformed_input, "dimension mismatch in matrix product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  T max_entry() const {
    T m = data_.empty() ? T(0) : data_[0];
    for (const auto& x : data_)
      if (x > m) m = x;
    return m;
  }

  T min_entry() const {
    T m = data_.empty() ? T(0) : data_[0];
    for (const auto& x : data_)
      if (x < m) m = x;
    return m;
  }

  bool is_positive() const {
    for (const auto& x : data_)
      if (!(x > T(0))) return false;
    return true;
  }

  bool is_nonnegative() const {
    for (const auto& x : data_)
      if (x < T(0)) return false;
    return true;
  }

  /// Multiplies every entry in place.
  void scale(const T& c) {
    for (auto& x : data_) x *= c;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class To, class From>
Matrix<To> convert_matrix(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = convert<To>(m(i, j));
  return out;
}

/// Non-negative matrix with a separate log-scale. Floating matrices are
/// rescaled by powers of two after each update (so the rescaling is exact)
/// keeping max entry in [1, 2); the represented matrix is entries * e^logscale.
/// Exact matrices are never rescaled and logscale stays 0.
template <class T>
class ScaledMatrix {
 public:
  ScaledMatrix() = default;
  explicit ScaledMatrix(Matrix<T> entries, double logscale = 0.0) : entries_(std::move(entries)), logscale_(logscale) {
    renormalize();
  }

  static ScaledMatrix identity(std::size_t d) { return ScaledMatrix(Matrix<T>::identity(d)); }

  const Matrix<T>& entries() const { return entries_; }
  /// For in-place column updates; call renormalize() afterwards.
  Matrix<T>& entries_mut() { return entries_; }
  double logscale() const { return logscale_; }
  std::size_t size() const { return entries_.rows(); }
  static constexpr Mode mode() { return ScalarTraits<T>::mode; }

  void renormalize() {
    if constexpr (!is_exact_v<T>) {
      using std::frexp;
      using std::ldexp;
      T m = entries_.max_entry();
      if (!(m > T(0))) return;
      int e = 0;
      frexp(m, &e);  // m = f * 2^e, f in [0.5, 1)
      int shift = e - 1;
      if (shift == 0) return;
      for (std::size_t i = 0; i < entries_.rows(); ++i)
        for (std::size_t j = 0; j < entries_.cols(); ++j) entries_(i, j) = ldexp(entries_(i, j), -shift);
      logscale_ += shift * std::log(2.0);
    }
  }

  /// entries * e^logscale; may overflow for long floating products.
  Matrix<T> value() const {
    Matrix<T> v = entries_;
    if constexpr (!is_exact_v<T>) {
      using std::exp;
      if (logscale_ != 0.0) v.scale(T(exp(T(logscale_))));
    }
    return v;
  }

  friend ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b) {
    return ScaledMatrix(a.entries_ * b.entries_, a.logscale_ + b.logscale_);
  }

  ScaledMatrix transpose() const { return ScaledMatrix(entries_.transpose(), logscale_); }

 private:
  Matrix<T> entries_;
  double logscale_ = 0.0;
};

namespace detail {

/// Row reduction to echelon form. Exact scalars pivot on the first nonzero,
/// floating ones on the largest magnitude. Returns pivot columns.
template <class T>
std::vector<std::size_t> row_reduce(Matrix<T>& a, std::size_t ncols, T* det = nullptr) {
  std::size_t rows = a.rows();
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  if (det) *det = T(1);
  for (std::size_t c = 0; c < ncols && r < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (a(i, c) == T(0)) continue;
      if (best == rows) best = i;
      if constexpr (is_exact_v<T>) {
        break;
      } else if (abs_value(a(i, c)) > abs_value(a(best, c))) {
        best = i;
      }
    }
    if (best == rows) {
      if (det) *det = T(0);
      continue;
    }
    if (best != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(best, j));
      if (det) *det = -*det;
    }
    T p = a(r, c);
    if (det) *det *= p;
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == T(0)) continue;
      T f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

template <class T>
T determinant(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::malformed_input, "determinant of a non-square matrix");
  Matrix<T> a = m;
  T det;
  auto pivots = detail::row_reduce(a, a.cols(), &det);
  if (pivots.size() < m.rows()) return T(0);
  return det;
}

/// Solves M x = b; singular-matrix if M is not invertible.
template <class T>
std::vector<T> solve(const Matrix<T>& m, const std::vector<T>& b) {
  std::size_t d = m.rows();
  if (m.cols() != d || b.size() != d) throw Error(ErrorCode::malformed_input, "solve needs a square system");
  Matrix<T> a(d, d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i, j) = m(i, j);
    a(i, d) = b[i];
  }
  auto pivots = detail::row_reduce(a, d);
  if (pivots.size() < d) throw Error(ErrorCode::singular_matrix, "matrix is singular");
  std::vector<T> x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = a(i, d);
  return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  std::size_t d = m.rows();
  if (m.cols() != d) throw Error(ErrorCode::malformed_input, "inverse of a non-square matrix");
  Matrix<T> a(d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i, j) = m(i, j);
    a(i, d + i) = T(1);
  }
  auto pivots = detail::row_reduce(a, d);
  if (pivots.size() < d) throw Error(ErrorCode::singular_matrix, "matrix is singular");
  Matrix<T> inv(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) inv(i, j) = a(i, d + j);
  return inv;
}

/// Basis of {x : M x = 0}, exact for exact scalars.
template <class T>
std::vector<std::vector<T>> null_space(const Matrix<T>& m) {
  Matrix<T> a = m;
  auto pivots = detail::row_reduce(a, a.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(m.cols(), T(0));
    v[f] = T(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  Matrix<T> a = m;
  return detail::row_reduce(a, a.cols()).size();
}

}  // namespace aiet
