#pragma once

// Exact dense linear algebra over any field type with +, -, *, / and an
// is_zero() overload (Rational, Cyclotomic).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rspin/scalar.hpp"

namespace rspin {

template <class T>
using Matrix = std::vector<std::vector<T>>;

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduced row echelon form in place. Returns the pivot column of each
/// nonzero row; rows past the rank are left zero.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && is_zero(m[sel][col])) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const T inv = invert(m[row][col]);
    for (std::size_t j = col; j < m[row].size(); ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || is_zero(m[i][col])) continue;
      const T factor = m[i][col];
      for (std::size_t j = col; j < m[i].size(); ++j) {
        if (!is_zero(m[row][j])) m[i][j] -= factor * m[row][j];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
struct LinearSolution {
  bool consistent = false;
  std::size_t rank = 0;
  std::size_t nullity = 0;
  /// A particular solution with free variables set to zero (empty if inconsistent).
  std::vector<T> values;
  /// determined[j]: variable j has the same value in every solution.
  std::vector<bool> determined;
};

/// Solves the augmented system [A | b] given as rows of length n + 1.
/// `zero` supplies the additive identity of the field.
template <class T>
LinearSolution<T> solve_augmented(Matrix<T> m, std::size_t n, const T& zero) {
  LinearSolution<T> out;
  const auto pivots = rref(m, n);
  out.rank = pivots.size();
  out.nullity = n - out.rank;
  for (std::size_t i = out.rank; i < m.size(); ++i) {
    if (!is_zero(m[i][n])) return out;
  }
  out.consistent = true;
  out.values.assign(n, zero);
  out.determined.assign(n, false);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    out.values[pivots[i]] = m[i][n];
    bool only_pivot = true;
    for (std::size_t j = 0; j < n && only_pivot; ++j) {
      if (!is_pivot[j] && !is_zero(m[i][j])) only_pivot = false;
    }
    out.determined[pivots[i]] = only_pivot;
  }
  return out;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a, const T& zero, const T& one) {
  const std::size_t n = a.size();
  Matrix<T> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = a[i];
    m[i].resize(2 * n, zero);
    m[i][n + i] = one;
  }
  const auto pivots = rref(m, n);
  if (pivots.size() != n) throw SingularMatrixError("matrix is singular");
  Matrix<T> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i].assign(m[i].begin() + static_cast<std::ptrdiff_t>(n), m[i].end());
  return inv;
}

template <class T>
T determinant(Matrix<T> m, const T& zero, const T& one) {
  const std::size_t n = m.size();
  T det = one;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && is_zero(m[sel][col])) ++sel;
    if (sel == n) return zero;
    if (sel != col) {
      std::swap(m[sel], m[col]);
      det = -det;
    }
    det *= m[col][col];
    const T inv = invert(m[col][col]);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(m[i][col])) continue;
      const T factor = m[i][col] * inv;
      for (std::size_t j = col; j < n; ++j) m[i][j] -= factor * m[col][j];
    }
  }
  return det;
}

}  // namespace rspin
