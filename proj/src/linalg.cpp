#include "setconv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace setconv {

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix out(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c)
      throw DimensionError("from_rows: ragged initializer (row " + std::to_string(i) + ")");
    std::copy(row.begin(), row.end(), out.row(i).begin());
    ++i;
  }
  return out;
}

bool Matrix::all_finite() const { return setconv::all_finite(data_); }

bool all_finite(std::span<const double> values) {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix softmax_columns(const Matrix& w) {
  Matrix out(w.rows(), w.cols());
  for (std::size_t k = 0; k < w.cols(); ++k) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < w.rows(); ++j) mx = std::max(mx, w(j, k));
    double sum = 0.0;
    for (std::size_t j = 0; j < w.rows(); ++j) {
      const double e = std::exp(w(j, k) - mx);
      out(j, k) = e;
      sum += e;
    }
    for (std::size_t j = 0; j < w.rows(); ++j) out(j, k) /= sum;
  }
  return out;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw DimensionError("khatri_rao: column counts differ (" + shape_str(a) +
                         " vs " + shape_str(b) + ")");
  const std::size_t n = a.rows();
  const std::size_t d = b.rows();
  const std::size_t k = a.cols();
  Matrix out(n * d, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t r = i * d + j;
      for (std::size_t c = 0; c < k; ++c) out(r, c) = a(i, c) * b(j, c);
    }
  return out;
}

Vector concat_rows(const Matrix& x) {
  if (x.empty()) throw InvalidArgument("concat_rows: empty input");
  return Vector(x.data(), x.data() + x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionError("dot: lengths differ (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vector matvec(const Matrix& m, const Vector& v) {
  if (m.cols() != v.size())
    throw DimensionError("matvec: " + shape_str(m) + " vs length " +
                         std::to_string(v.size()));
  Vector out(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = dot(m.row(r), v);
  return out;
}

Vector vecmat(std::span<const double> v, const Matrix& m) {
  if (v.size() != m.rows())
    throw DimensionError("vecmat: length " + std::to_string(v.size()) +
                         " vs " + shape_str(m));
  Vector out(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double vr = v[r];
    const double* row = m.data() + r * m.cols();
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += vr * row[c];
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: " + shape_str(a) + " vs " + shape_str(b));
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* dst = out.data() + i * b.cols();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* src = b.data() + k * b.cols();
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

Matrix apply_permutation(const std::vector<std::size_t>& pi, const Matrix& x) {
  if (pi.size() != x.rows())
    throw InvalidArgument("apply_permutation: permutation length " +
                          std::to_string(pi.size()) + " vs " +
                          std::to_string(x.rows()) + " rows");
  std::vector<bool> seen(pi.size(), false);
  for (std::size_t p : pi) {
    if (p >= pi.size() || seen[p])
      throw InvalidArgument("apply_permutation: not a bijection on row indices");
    seen[p] = true;
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const auto src = x.row(pi[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix take_rows(const Matrix& x, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= x.rows())
      throw InvalidArgument("take_rows: index " + std::to_string(idx[i]) +
                            " out of range");
    const auto src = x.row(idx[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Vector row_vector(const Matrix& x, std::size_t r) {
  if (r >= x.rows()) throw InvalidArgument("row_vector: row index out of range");
  const auto s = x.row(r);
  return Vector(s.begin(), s.end());
}

Matrix from_row(std::span<const double> v) {
  Matrix out(1, v.size());
  std::copy(v.begin(), v.end(), out.row(0).begin());
  return out;
}

}  // namespace setconv
