#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "setconv/linalg.hpp"
#include "setconv/rng.hpp"

namespace setconv {

/// Feature-space reference point: the per-feature mean of the minority
/// class. Kernel weights are estimated from each sample's offset to it.
struct Anchor {
  Vector values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const Anchor&) const = default;
};

/// One hidden layer with rectifier activation, linear output. Maps a
/// d-dimensional offset to the per-sample kernel row of width d_o.
struct MlpParams {
  Matrix hidden_weights;  // d x H
  Vector hidden_bias;     // H
  Matrix output_weights;  // H x d_o
  Vector output_bias;     // d_o

  bool operator==(const MlpParams&) const = default;
};

/// Learnable state of the set-convolution layer.
///
/// The layer compresses a sample set X (N x d) into one embedding of width
/// d_o. Its full kernel over the stacked set decomposes as the column-wise
/// Kronecker product of two parts: a data-sensitive row per sample,
/// mlp(anchor - x_i), and a shared feature-attention column per output,
/// softmax_columns(attention)[:, k]. The embedding is
///
///   h[k] = (1/N) * sum_i mlp(anchor - x_i)[k] * dot(x_i, attn_col_k)
///
/// which is invariant to the ordering of the rows of X.
struct SetConvParams {
  std::size_t input_dim = 0;   // d
  std::size_t hidden_dim = 0;  // H
  std::size_t output_dim = 0;  // d_o
  Matrix attention;            // d x d_o, pre-softmax
  MlpParams mlp;

  bool operator==(const SetConvParams&) const = default;
};

/// Gradient buffers, shape-congruent with SetConvParams.
struct SetConvGrads {
  Matrix attention;
  MlpParams mlp;

  bool operator==(const SetConvGrads&) const = default;
};

Anchor compute_anchor(const Matrix& minority_samples);

/// Embedding of the set x, computed through the factored kernel
/// (per-sample mlp row times shared attention column).
Vector setconv_forward(const Matrix& x, const SetConvParams& params,
                       const Anchor& anchor);

/// Same embedding via explicit per-sample d x d_o kernel tensors and a
/// tensor-dot accumulation. Reference path for the factored implementation;
/// quadratic in memory per sample, test use only.
Vector setconv_forward_naive(const Matrix& x, const SetConvParams& params,
                             const Anchor& anchor);

/// Gradients of dot(upstream, setconv_forward(x, ...)) with respect to the
/// attention matrix and every mlp parameter.
SetConvGrads setconv_backward(const Matrix& x, const SetConvParams& params,
                              const Anchor& anchor, const Vector& upstream);

/// Zero-mean scaled uniform init (half-width 1/sqrt(fan_in)) for weights,
/// zero biases. Draw order: attention, hidden weights, output weights, each
/// row-major.
SetConvParams init_params(std::size_t input_dim, std::size_t output_dim,
                          std::size_t hidden_dim, Rng& rng);

SetConvGrads zero_grads(const SetConvParams& params);

void accumulate(SetConvGrads& into, const SetConvGrads& from);

/// Flat views over the learnable arrays, in the fixed order:
/// attention, hidden_weights, hidden_bias, output_weights, output_bias.
std::vector<std::span<double>> param_arrays(SetConvParams& params);
std::vector<std::span<double>> grad_arrays(SetConvGrads& grads);
std::vector<std::span<const double>> param_arrays(const SetConvParams& params);
std::vector<std::span<const double>> grad_arrays(const SetConvGrads& grads);

}  // namespace setconv
