#include <cmath>

#include <doctest.h>

#include "setconv/linalg.hpp"
#include "test_helpers.hpp"

using namespace setconv;
using namespace setconv::testing;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("softmax_columns uniform on zeros") {
  const Matrix s = softmax_columns(Matrix(2, 2));
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) CHECK(s(j, k) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("softmax_columns analytic column") {
  const Matrix w = Matrix::from_rows({{0.0}, {std::log(3.0)}});
  const Matrix s = softmax_columns(w);
  CHECK(s(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s(1, 0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("softmax_columns is column-stochastic, including extreme inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + rng.below(12);
    const std::size_t cols = 1 + rng.below(8);
    const double scale = trial % 3 == 0 ? 1e6 : (trial % 3 == 1 ? 1e-6 : 3.0);
    const Matrix w = random_matrix(rows, cols, rng, -scale, scale);
    const Matrix s = softmax_columns(w);
    REQUIRE(s.all_finite());
    // Entries are strictly positive as long as the column spread stays
    // inside the representable range of exp; beyond that they underflow
    // to +0 but the column sums still hold.
    const bool exp_representable = scale <= 350.0;
    for (std::size_t k = 0; k < cols; ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < rows; ++j) {
        if (exp_representable) CHECK(s(j, k) > 0.0);
        CHECK(s(j, k) >= 0.0);
        CHECK(s(j, k) <= 1.0);
        sum += s(j, k);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("khatri_rao by definition") {
  const Matrix a = Matrix::from_rows({{2.0}, {3.0}});
  const Matrix b = Matrix::from_rows({{1.0}, {4.0}});
  const Matrix out = khatri_rao(a, b);
  REQUIRE(out.rows() == 4);
  REQUIRE(out.cols() == 1);
  CHECK(out(0, 0) == 2.0);
  CHECK(out(1, 0) == 8.0);
  CHECK(out(2, 0) == 3.0);
  CHECK(out(3, 0) == 12.0);
}

TEST_CASE("khatri_rao with a row of ones reproduces the other factor") {
  Rng rng(5);
  const Matrix b = random_matrix(4, 3, rng);
  const Matrix ones(1, 3, 1.0);
  CHECK(khatri_rao(ones, b) == b);
}

TEST_CASE("khatri_rao entry law on random shapes") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const std::size_t d = 1 + rng.below(6);
    const std::size_t k = 1 + rng.below(5);
    const Matrix a = random_matrix(n, k, rng);
    const Matrix b = random_matrix(d, k, rng);
    const Matrix out = khatri_rao(a, b);
    REQUIRE(out.rows() == n * d);
    REQUIRE(out.cols() == k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t c = 0; c < k; ++c)
          CHECK(out(i * d + j, c) == a(i, c) * b(j, c));
  }
}

TEST_CASE("khatri_rao rejects mismatched columns") {
  CHECK_THROWS_AS(khatri_rao(Matrix(2, 3), Matrix(2, 2)), DimensionError);
}

TEST_CASE("concat_rows basics") {
  const Matrix x = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(concat_rows(x) == Vector{1.0, 2.0, 3.0, 4.0});

  const Matrix row = Matrix::from_rows({{5.0, 6.0, 7.0}});
  CHECK(concat_rows(row) == Vector{5.0, 6.0, 7.0});

  CHECK_THROWS_AS(concat_rows(Matrix()), InvalidArgument);
}

TEST_CASE("concat_rows index law on random input") {
  Rng rng(23);
  const Matrix x = random_matrix(4, 3, rng);
  const Vector v = concat_rows(x);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(v[i * 3 + j] == x(i, j));
}

TEST_CASE("dot products") {
  CHECK(dot(Vector{1.0, 0.0}, Vector{0.0, 1.0}) == 0.0);
  CHECK(dot(Vector{1.0, 2.0}, Vector{3.0, 4.0}) == 11.0);
  CHECK_THROWS_AS(dot(Vector{1.0}, Vector{1.0, 2.0}), DimensionError);

  Rng rng(7);
  const Vector a = random_vector(31, rng);
  const Vector b = random_vector(31, rng);
  double expected = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) expected += a[i] * b[i];
  CHECK(dot(a, b) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("matvec and matmul against loop oracles") {
  Rng rng(29);
  const Matrix m = random_matrix(5, 4, rng);
  const Vector v = random_vector(4, rng);
  const Vector mv = matvec(m, v);
  for (std::size_t r = 0; r < 5; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 4; ++c) s += m(r, c) * v[c];
    CHECK(mv[r] == doctest::Approx(s).epsilon(1e-14));
  }

  const Matrix a = random_matrix(3, 5, rng);
  const Matrix b = random_matrix(5, 2, rng);
  const Matrix ab = matmul(a, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 5; ++k) s += a(i, k) * b(k, j);
      CHECK(ab(i, j) == doctest::Approx(s).epsilon(1e-13));
    }

  const Vector vm = vecmat(random_vector(3, rng), a);
  CHECK(vm.size() == 5);
  CHECK_THROWS_AS(matmul(a, a), DimensionError);
  CHECK_THROWS_AS(matvec(m, Vector{1.0}), DimensionError);
  CHECK_THROWS_AS(vecmat(Vector{1.0}, m), DimensionError);
}

TEST_CASE("matmul associativity on conditioned inputs") {
  Rng rng(31);
  const Matrix a = random_matrix(4, 6, rng);
  const Matrix b = random_matrix(6, 5, rng);
  const Matrix c = random_matrix(5, 3, rng);
  const Matrix left = matmul(matmul(a, b), c);
  const Matrix right = matmul(a, matmul(b, c));
  for (std::size_t i = 0; i < left.rows(); ++i)
    for (std::size_t j = 0; j < left.cols(); ++j)
      CHECK(std::abs(left(i, j) - right(i, j)) <= 1e-9);
}

TEST_CASE("apply_permutation identity, swap, and inverse round trip") {
  const Matrix x = Matrix::from_rows({{1.5, 1.5}, {-2.0, -2.0}});
  CHECK(apply_permutation({0, 1}, x) == x);
  CHECK(apply_permutation({1, 0}, x) ==
        Matrix::from_rows({{-2.0, -2.0}, {1.5, 1.5}}));

  Rng rng(37);
  const Matrix y = random_matrix(9, 4, rng);
  const auto pi = random_permutation(9, rng);
  std::vector<std::size_t> inverse(9);
  for (std::size_t i = 0; i < 9; ++i) inverse[pi[i]] = i;
  CHECK(apply_permutation(inverse, apply_permutation(pi, y)) == y);

  CHECK_THROWS_AS(apply_permutation({0, 0}, x), InvalidArgument);
  CHECK_THROWS_AS(apply_permutation({0, 5}, x), InvalidArgument);
  CHECK_THROWS_AS(apply_permutation({0}, x), InvalidArgument);
}

TEST_CASE("concat of a permuted matrix equals concat times the expansion operator") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const std::size_t d = 1 + rng.below(5);
    const Matrix x = random_matrix(n, d, rng);
    const auto pi = random_permutation(n, rng);
    const Vector lhs = concat_rows(apply_permutation(pi, x));
    const Vector rhs = vecmat(concat_rows(x), expansion_operator(pi, d));
    CHECK(lhs == rhs);  // both are entry relocations, no arithmetic error
  }
}

TEST_SUITE_END();
