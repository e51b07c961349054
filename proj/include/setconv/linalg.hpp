#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "setconv/errors.hpp"

namespace setconv {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit floats. Row-major so that stacking the
/// rows into one long vector is a view of the same buffer.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool all_finite() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

bool all_finite(std::span<const double> values);

/// Column-wise softmax: every column of the result sums to 1. Overflow-safe
/// via per-column max subtraction.
Matrix softmax_columns(const Matrix& w);

/// Column-wise Kronecker product: out[(i*d + j), k] = a(i,k) * b(j,k)
/// for a of shape N x K and b of shape d x K; result is (N*d) x K.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

/// Rows of x stacked into one vector: out[i*d + j] == x(i, j).
Vector concat_rows(const Matrix& x);

double dot(std::span<const double> a, std::span<const double> b);

/// m * v for m of shape R x C and v of length C.
Vector matvec(const Matrix& m, const Vector& v);

/// v^T * m for v of length R and m of shape R x C.
Vector vecmat(std::span<const double> v, const Matrix& m);

Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

/// Row reordering: result row i is x row pi[i]. pi must be a bijection on
/// [0, rows).
Matrix apply_permutation(const std::vector<std::size_t>& pi, const Matrix& x);

/// Row subset in the order given by idx (indices may repeat).
Matrix take_rows(const Matrix& x, std::span<const std::size_t> idx);

Vector row_vector(const Matrix& x, std::size_t r);

/// A 1 x d matrix holding v as its only row (singleton sample set).
Matrix from_row(std::span<const double> v);

}  // namespace setconv
