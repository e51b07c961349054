#include "setconv/layer.hpp"

#include <cmath>
#include <string>

namespace setconv {

namespace {

void check_shapes(const Matrix& x, const SetConvParams& p, const Anchor& anchor) {
  if (x.rows() == 0) throw InvalidArgument("setconv: empty sample set");
  if (x.cols() != p.input_dim)
    throw DimensionError("setconv: input has " + std::to_string(x.cols()) +
                         " features, params expect " + std::to_string(p.input_dim));
  if (anchor.dim() != p.input_dim)
    throw DimensionError("setconv: anchor dimension " + std::to_string(anchor.dim()) +
                         " vs input dimension " + std::to_string(p.input_dim));
  if (p.attention.rows() != p.input_dim || p.attention.cols() != p.output_dim ||
      p.mlp.hidden_weights.rows() != p.input_dim ||
      p.mlp.hidden_weights.cols() != p.hidden_dim ||
      p.mlp.hidden_bias.size() != p.hidden_dim ||
      p.mlp.output_weights.rows() != p.hidden_dim ||
      p.mlp.output_weights.cols() != p.output_dim ||
      p.mlp.output_bias.size() != p.output_dim)
    throw DimensionError("setconv: parameter shapes do not chain");
}

/// anchor - x_i, one row per sample.
Matrix offsets_to_anchor(const Matrix& x, const Anchor& anchor) {
  Matrix d(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      d(i, j) = anchor.values[j] - x(i, j);
  return d;
}

struct MlpForward {
  Matrix pre_hidden;  // N x H
  Matrix hidden;      // N x H, rectified
  Matrix output;      // N x d_o
};

MlpForward mlp_forward(const Matrix& offsets, const MlpParams& mlp) {
  MlpForward f;
  f.pre_hidden = matmul(offsets, mlp.hidden_weights);
  for (std::size_t i = 0; i < f.pre_hidden.rows(); ++i)
    for (std::size_t j = 0; j < f.pre_hidden.cols(); ++j)
      f.pre_hidden(i, j) += mlp.hidden_bias[j];
  f.hidden = f.pre_hidden;
  for (std::size_t i = 0; i < f.hidden.rows(); ++i)
    for (std::size_t j = 0; j < f.hidden.cols(); ++j)
      if (f.hidden(i, j) < 0.0) f.hidden(i, j) = 0.0;
  f.output = matmul(f.hidden, mlp.output_weights);
  for (std::size_t i = 0; i < f.output.rows(); ++i)
    for (std::size_t j = 0; j < f.output.cols(); ++j)
      f.output(i, j) += mlp.output_bias[j];
  return f;
}

}  // namespace

Anchor compute_anchor(const Matrix& minority_samples) {
  if (minority_samples.rows() == 0)
    throw InvalidArgument("compute_anchor: empty minority class");
  Anchor anchor;
  anchor.values.assign(minority_samples.cols(), 0.0);
  for (std::size_t i = 0; i < minority_samples.rows(); ++i)
    for (std::size_t j = 0; j < minority_samples.cols(); ++j)
      anchor.values[j] += minority_samples(i, j);
  for (double& v : anchor.values)
    v /= static_cast<double>(minority_samples.rows());
  return anchor;
}

Vector setconv_forward(const Matrix& x, const SetConvParams& params,
                       const Anchor& anchor) {
  check_shapes(x, params, anchor);
  const std::size_t n = x.rows();

  const Matrix kernel_rows = mlp_forward(offsets_to_anchor(x, anchor), params.mlp).output;
  const Matrix attn = softmax_columns(params.attention);  // d x d_o
  const Matrix projected = matmul(x, attn);               // N x d_o

  Vector h(params.output_dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < params.output_dim; ++k)
      h[k] += kernel_rows(i, k) * projected(i, k);
  for (double& v : h) v /= static_cast<double>(n);

  if (!all_finite(h)) throw Error("setconv_forward: non-finite output");
  return h;
}

Vector setconv_forward_naive(const Matrix& x, const SetConvParams& params,
                             const Anchor& anchor) {
  check_shapes(x, params, anchor);
  const std::size_t n = x.rows();

  const Matrix kernel_rows = mlp_forward(offsets_to_anchor(x, anchor), params.mlp).output;
  const Matrix attn = softmax_columns(params.attention);

  Vector h(params.output_dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Full kernel slice for sample i, then tensor dot with the sample.
    Matrix kernel(params.input_dim, params.output_dim);
    for (std::size_t j = 0; j < params.input_dim; ++j)
      for (std::size_t k = 0; k < params.output_dim; ++k)
        kernel(j, k) = kernel_rows(i, k) * attn(j, k);
    const Vector contrib = vecmat(x.row(i), kernel);
    for (std::size_t k = 0; k < params.output_dim; ++k) h[k] += contrib[k];
  }
  for (double& v : h) v /= static_cast<double>(n);

  if (!all_finite(h)) throw Error("setconv_forward_naive: non-finite output");
  return h;
}

SetConvGrads setconv_backward(const Matrix& x, const SetConvParams& params,
                              const Anchor& anchor, const Vector& upstream) {
  check_shapes(x, params, anchor);
  if (upstream.size() != params.output_dim)
    throw DimensionError("setconv_backward: upstream gradient has length " +
                         std::to_string(upstream.size()) + ", expected " +
                         std::to_string(params.output_dim));
  const std::size_t n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(n);

  const Matrix offsets = offsets_to_anchor(x, anchor);
  const MlpForward mlp = mlp_forward(offsets, params.mlp);
  const Matrix attn = softmax_columns(params.attention);
  const Matrix projected = matmul(x, attn);  // N x d_o

  // d/d(kernel_rows) and d/d(projected) of dot(upstream, h).
  Matrix d_kernel_rows(n, params.output_dim);
  Matrix d_projected(n, params.output_dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < params.output_dim; ++k) {
      d_kernel_rows(i, k) = upstream[k] * inv_n * projected(i, k);
      d_projected(i, k) = upstream[k] * inv_n * mlp.output(i, k);
    }

  SetConvGrads grads = zero_grads(params);

  // Through the attention softmax: d_attn = X^T * d_projected, then the
  // column-wise softmax Jacobian.
  const Matrix d_attn = matmul(transpose(x), d_projected);  // d x d_o
  for (std::size_t k = 0; k < params.output_dim; ++k) {
    double weighted = 0.0;
    for (std::size_t j = 0; j < params.input_dim; ++j)
      weighted += d_attn(j, k) * attn(j, k);
    for (std::size_t j = 0; j < params.input_dim; ++j)
      grads.attention(j, k) = attn(j, k) * (d_attn(j, k) - weighted);
  }

  // Through the mlp.
  grads.mlp.output_weights = matmul(transpose(mlp.hidden), d_kernel_rows);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < params.output_dim; ++k)
      grads.mlp.output_bias[k] += d_kernel_rows(i, k);

  Matrix d_hidden = matmul(d_kernel_rows, transpose(params.mlp.output_weights));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < params.hidden_dim; ++j)
      if (mlp.pre_hidden(i, j) <= 0.0) d_hidden(i, j) = 0.0;

  grads.mlp.hidden_weights = matmul(transpose(offsets), d_hidden);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < params.hidden_dim; ++j)
      grads.mlp.hidden_bias[j] += d_hidden(i, j);

  return grads;
}

SetConvParams init_params(std::size_t input_dim, std::size_t output_dim,
                          std::size_t hidden_dim, Rng& rng) {
  if (input_dim == 0 || output_dim == 0 || hidden_dim == 0)
    throw InvalidArgument("init_params: dimensions must be positive");

  SetConvParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.output_dim = output_dim;
  p.attention = Matrix(input_dim, output_dim);
  p.mlp.hidden_weights = Matrix(input_dim, hidden_dim);
  p.mlp.hidden_bias.assign(hidden_dim, 0.0);
  p.mlp.output_weights = Matrix(hidden_dim, output_dim);
  p.mlp.output_bias.assign(output_dim, 0.0);

  const auto fill_uniform = [&rng](Matrix& m, std::size_t fan_in) {
    const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-s, s);
  };
  fill_uniform(p.attention, input_dim);
  fill_uniform(p.mlp.hidden_weights, input_dim);
  fill_uniform(p.mlp.output_weights, hidden_dim);
  return p;
}

SetConvGrads zero_grads(const SetConvParams& params) {
  SetConvGrads g;
  g.attention = Matrix(params.attention.rows(), params.attention.cols());
  g.mlp.hidden_weights =
      Matrix(params.mlp.hidden_weights.rows(), params.mlp.hidden_weights.cols());
  g.mlp.hidden_bias.assign(params.mlp.hidden_bias.size(), 0.0);
  g.mlp.output_weights =
      Matrix(params.mlp.output_weights.rows(), params.mlp.output_weights.cols());
  g.mlp.output_bias.assign(params.mlp.output_bias.size(), 0.0);
  return g;
}

void accumulate(SetConvGrads& into, const SetConvGrads& from) {
  const auto dst = grad_arrays(into);
  const auto src = grad_arrays(from);
  for (std::size_t a = 0; a < dst.size(); ++a) {
    if (dst[a].size() != src[a].size())
      throw DimensionError("accumulate: gradient shapes differ");
    for (std::size_t i = 0; i < dst[a].size(); ++i) dst[a][i] += src[a][i];
  }
}

namespace {

template <typename Params, typename Span>
std::vector<Span> arrays_of(Params& p) {
  return {Span{p.attention.data(), p.attention.size()},
          Span{p.mlp.hidden_weights.data(), p.mlp.hidden_weights.size()},
          Span{p.mlp.hidden_bias.data(), p.mlp.hidden_bias.size()},
          Span{p.mlp.output_weights.data(), p.mlp.output_weights.size()},
          Span{p.mlp.output_bias.data(), p.mlp.output_bias.size()}};
}

}  // namespace

std::vector<std::span<double>> param_arrays(SetConvParams& params) {
  return arrays_of<SetConvParams, std::span<double>>(params);
}
std::vector<std::span<double>> grad_arrays(SetConvGrads& grads) {
  return arrays_of<SetConvGrads, std::span<double>>(grads);
}
std::vector<std::span<const double>> param_arrays(const SetConvParams& params) {
  return arrays_of<const SetConvParams, std::span<const double>>(params);
}
std::vector<std::span<const double>> grad_arrays(const SetConvGrads& grads) {
  return arrays_of<const SetConvGrads, std::span<const double>>(grads);
}

}  // namespace setconv
