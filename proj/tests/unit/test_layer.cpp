#include <cmath>

#include <doctest.h>

#include "setconv/layer.hpp"
#include "test_helpers.hpp"

using namespace setconv;
using namespace setconv::testing;

TEST_SUITE_BEGIN("layer");

TEST_CASE("compute_anchor column means") {
  const Matrix m = Matrix::from_rows({{1.0, 3.0}, {3.0, 5.0}});
  CHECK(compute_anchor(m).values == Vector{2.0, 4.0});

  const Matrix single = Matrix::from_rows({{-1.0, 0.25, 9.0}});
  CHECK(compute_anchor(single).values == Vector{-1.0, 0.25, 9.0});

  CHECK_THROWS_AS(compute_anchor(Matrix()), InvalidArgument);
}

TEST_CASE("compute_anchor matches accumulation oracle on 1000 rows") {
  Rng rng(61);
  const Matrix m = random_matrix(1000, 7, rng, -5.0, 5.0);
  const Anchor anchor = compute_anchor(m);
  for (std::size_t j = 0; j < 7; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) sum += m(i, j);
    CHECK(std::abs(anchor.values[j] - sum / 1000.0) <= 1e-12);
  }
}

TEST_CASE("forward under stub parameters") {
  // Zero mlp weights with output bias one make every kernel row 1; zero
  // attention makes each column uniform 1/d. The embedding entry is then
  // the mean over samples of the sample's feature mean: (1/2)(1 + 3) = 2.
  const SetConvParams p = stub_params(2, 3, 4);
  const Matrix x = Matrix::from_rows({{1.0, 1.0}, {3.0, 3.0}});
  const Anchor anchor{Vector{0.0, 0.0}};

  for (const Vector& h : {setconv_forward(x, p, anchor),
                          setconv_forward_naive(x, p, anchor)}) {
    REQUIRE(h.size() == 3);
    for (double v : h) CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("naive path on a singleton set is the direct kernel product") {
  Rng rng(67);
  const std::size_t d = 4, d_o = 3, h = 5;
  const SetConvParams p = random_params(d, d_o, h, rng);
  const Vector xv = random_vector(d, rng);
  const Anchor anchor{random_vector(d, rng)};

  const Vector got = setconv_forward_naive(from_row(xv), p, anchor);

  // Direct evaluation: kernel = khatri_rao(mlp_row, attention columns) for
  // a single sample, contracted against the sample.
  Vector offset(d);
  for (std::size_t j = 0; j < d; ++j) offset[j] = anchor.values[j] - xv[j];
  Vector hidden(h, 0.0);
  for (std::size_t k = 0; k < h; ++k) {
    double acc = p.mlp.hidden_bias[k];
    for (std::size_t j = 0; j < d; ++j) acc += offset[j] * p.mlp.hidden_weights(j, k);
    hidden[k] = acc > 0.0 ? acc : 0.0;
  }
  Vector kernel_row(d_o, 0.0);
  for (std::size_t k = 0; k < d_o; ++k) {
    double acc = p.mlp.output_bias[k];
    for (std::size_t j = 0; j < h; ++j) acc += hidden[j] * p.mlp.output_weights(j, k);
    kernel_row[k] = acc;
  }
  const Matrix attn = softmax_columns(p.attention);
  const Matrix kernel = khatri_rao(from_row(kernel_row), attn);  // d x d_o slice
  const Vector expected = vecmat(xv, kernel);
  CHECK(max_abs_diff(got, expected) <= 1e-12);
}

TEST_CASE("factored and naive paths agree on random instances") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const std::size_t d = 1 + rng.below(8);
    const std::size_t d_o = 1 + rng.below(6);
    const std::size_t h = 1 + rng.below(8);
    const SetConvParams p = random_params(d, d_o, h, rng);
    const Matrix x = random_matrix(n, d, rng);
    const Anchor anchor{random_vector(d, rng)};
    CHECK(max_abs_diff(setconv_forward(x, p, anchor),
                       setconv_forward_naive(x, p, anchor)) <= 1e-9);
  }
}

TEST_CASE("forward is permutation invariant") {
  Rng rng(73);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(16);
    const std::size_t d = 1 + rng.below(8);
    const SetConvParams p = random_params(d, 1 + rng.below(6), 1 + rng.below(8), rng);
    const Matrix x = random_matrix(n, d, rng);
    const Anchor anchor{random_vector(d, rng)};
    const auto pi = random_permutation(n, rng);
    CHECK(max_abs_diff(setconv_forward(x, p, anchor),
                       setconv_forward(apply_permutation(pi, x), p, anchor)) <= 1e-9);
  }
}

TEST_CASE("forward is invariant under duplicating the set") {
  Rng rng(79);
  const std::size_t n = 5, d = 4;
  const SetConvParams p = random_params(d, 6, 7, rng);
  const Matrix x = random_matrix(n, d, rng);
  const Anchor anchor{random_vector(d, rng)};

  Matrix doubled(2 * n, d);
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < d; ++j) doubled(i, j) = x(i % n, j);

  CHECK(max_abs_diff(setconv_forward(x, p, anchor),
                     setconv_forward(doubled, p, anchor)) <= 1e-9);
}

TEST_CASE("backward with zero upstream is exactly zero") {
  Rng rng(83);
  const SetConvParams p = random_params(3, 4, 5, rng);
  const Matrix x = random_matrix(6, 3, rng);
  const Anchor anchor{random_vector(3, rng)};
  const SetConvGrads g = setconv_backward(x, p, anchor, Vector(4, 0.0));
  for (auto span : grad_arrays(g))
    for (double v : span) CHECK(v == 0.0);
}

TEST_CASE("backward is invariant under duplicating the set") {
  Rng rng(89);
  const std::size_t n = 4, d = 3, d_o = 4;
  const SetConvParams p = random_params(d, d_o, 6, rng);
  const Matrix x = random_matrix(n, d, rng);
  const Anchor anchor{random_vector(d, rng)};
  const Vector upstream = random_vector(d_o, rng);

  Matrix doubled(2 * n, d);
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < d; ++j) doubled(i, j) = x(i % n, j);

  const SetConvGrads a = setconv_backward(x, p, anchor, upstream);
  const SetConvGrads b = setconv_backward(doubled, p, anchor, upstream);
  const auto sa = grad_arrays(a);
  const auto sb = grad_arrays(b);
  for (std::size_t s = 0; s < sa.size(); ++s)
    for (std::size_t i = 0; i < sa[s].size(); ++i)
      CHECK(std::abs(sa[s][i] - sb[s][i]) <= 1e-9);
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(97);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const std::size_t d = 1 + rng.below(8);
    const std::size_t d_o = 1 + rng.below(4);
    const std::size_t h = 1 + rng.below(8);
    const SetConvParams p = random_params(d, d_o, h, rng);
    const Matrix x = random_matrix(n, d, rng);
    const Anchor anchor{random_vector(d, rng)};
    const Vector upstream = random_vector(d_o, rng);

    const SetConvGrads analytic = setconv_backward(x, p, anchor, upstream);
    const SetConvGrads numeric = finite_difference_grads(x, p, anchor, upstream);
    CHECK(max_grad_rel_err(analytic, numeric) <= 1e-4);
  }
}

TEST_CASE("init_params shapes, determinism, and bounds") {
  Rng a(7), b(7);
  const SetConvParams pa = init_params(4, 3, 8, a);
  const SetConvParams pb = init_params(4, 3, 8, b);
  CHECK(pa == pb);

  CHECK(pa.attention.rows() == 4);
  CHECK(pa.attention.cols() == 3);
  CHECK(pa.mlp.hidden_weights.rows() == 4);
  CHECK(pa.mlp.hidden_weights.cols() == 8);
  CHECK(pa.mlp.hidden_bias.size() == 8);
  CHECK(pa.mlp.output_weights.rows() == 8);
  CHECK(pa.mlp.output_weights.cols() == 3);
  CHECK(pa.mlp.output_bias.size() == 3);

  for (double v : pa.mlp.hidden_bias) CHECK(v == 0.0);
  for (double v : pa.mlp.output_bias) CHECK(v == 0.0);

  const double bound_d = 1.0 / std::sqrt(4.0);
  const double bound_h = 1.0 / std::sqrt(8.0);
  for (std::size_t i = 0; i < pa.attention.size(); ++i)
    CHECK(std::abs(pa.attention.data()[i]) <= bound_d);
  for (std::size_t i = 0; i < pa.mlp.hidden_weights.size(); ++i)
    CHECK(std::abs(pa.mlp.hidden_weights.data()[i]) <= bound_d);
  for (std::size_t i = 0; i < pa.mlp.output_weights.size(); ++i)
    CHECK(std::abs(pa.mlp.output_weights.data()[i]) <= bound_h);

  Rng c(1);
  CHECK_THROWS_AS(init_params(0, 3, 8, c), InvalidArgument);
}

TEST_CASE("shape errors are reported") {
  Rng rng(3);
  const SetConvParams p = random_params(3, 2, 4, rng);
  const Anchor anchor{random_vector(3, rng)};
  CHECK_THROWS_AS(setconv_forward(Matrix(2, 4), p, anchor), DimensionError);
  CHECK_THROWS_AS(setconv_forward(Matrix(), p, anchor), InvalidArgument);
  CHECK_THROWS_AS(setconv_forward(Matrix(2, 3), p, Anchor{Vector{1.0}}),
                  DimensionError);
  CHECK_THROWS_AS(setconv_backward(Matrix(2, 3), p, anchor, Vector(5, 0.0)),
                  DimensionError);
}

TEST_SUITE_END();
