#pragma once

#include "carnot/errors.hpp"

#include <cstddef>
#include <vector>

namespace carnot {

/// Dense row-major matrix over an arbitrary scalar. Exact linear algebra
/// (rank, inverse, solve) is implemented for Mat<Rational> in
/// rational_linalg.hpp; float paths use Eigen and convert at the boundary.
template <class T>
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  Mat operator*(const Mat& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product shape");
    Mat out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
      }
    return out;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix apply shape");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  bool operator==(const Mat& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
  }

  /// Submatrix picking the given rows and columns (0-based, in order).
  Mat select(const std::vector<int>& row_ids, const std::vector<int>& col_ids) const {
    Mat out(row_ids.size(), col_ids.size());
    for (std::size_t i = 0; i < row_ids.size(); ++i)
      for (std::size_t j = 0; j < col_ids.size(); ++j) {
        int r = row_ids[i], c = col_ids[j];
        if (r < 0 || static_cast<std::size_t>(r) >= rows_ || c < 0 ||
            static_cast<std::size_t>(c) >= cols_)
          throw IndexError("submatrix index out of range");
        out(i, j) = (*this)(r, c);
      }
    return out;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

} // namespace carnot
