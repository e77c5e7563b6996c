#include "carnot/rational_linalg.hpp"

#include <cmath>
#include <cstdlib>

namespace carnot {

std::size_t rank_exact(RatMat m) {
  std::size_t rank = 0;
  std::size_t rows = m.rows(), cols = m.cols();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && m(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != row)
      for (std::size_t j = col; j < cols; ++j) std::swap(m(row, j), m(pivot, j));
    for (std::size_t i = row + 1; i < rows; ++i) {
      if (m(i, col) == 0) continue;
      Rational f = m(i, col) / m(row, col);
      for (std::size_t j = col; j < cols; ++j) m(i, j) -= f * m(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

Rational det_exact(RatMat m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
  std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col) == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(m(col, j), m(pivot, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m(i, col) == 0) continue;
      Rational f = m(i, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

RatMat inverse_exact(const RatMat& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
  std::size_t n = m.rows();
  RatMat a = m;
  RatMat inv = RatMat::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw InternalError("singular matrix in inverse_exact");
    if (pivot != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

std::optional<RatVec> solve_first_pivot(const RatMat& a, const RatVec& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve shape");
  std::size_t rows = a.rows(), cols = a.cols();
  RatMat aug(rows, cols + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols) = b[i];
  }

  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && aug(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != row)
      for (std::size_t j = col; j <= cols; ++j) std::swap(aug(row, j), aug(pivot, j));
    Rational p = aug(row, col);
    for (std::size_t j = col; j <= cols; ++j) aug(row, j) /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || aug(i, col) == 0) continue;
      Rational f = aug(i, col);
      for (std::size_t j = col; j <= cols; ++j) aug(i, j) -= f * aug(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < rows; ++i)
    if (aug(i, cols) != 0) return std::nullopt;

  RatVec x(cols, Rational(0));
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = aug(r, cols);
  return x;
}

double det_double(Mat<double> m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
  std::size_t n = m.rows();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(m(col, col));
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(m(i, col)) > best) {
        best = std::abs(m(i, col));
        pivot = i;
      }
    if (best == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(m(col, j), m(pivot, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      double f = m(i, col) / m(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

} // namespace carnot
