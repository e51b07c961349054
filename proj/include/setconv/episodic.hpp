#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "setconv/data.hpp"
#include "setconv/layer.hpp"

namespace setconv {

/// One training batch: a support set that preserves the class imbalance
/// ratio, plus exactly one query sample per class, disjoint from this
/// episode's support rows.
struct Episode {
  Matrix support_majority;  // N1 x d
  Matrix support_minority;  // N2 x d
  Vector query_majority;    // d
  Vector query_minority;    // d
};

struct TrainConfig {
  std::size_t support_size = 64;
  std::size_t iterations = 2000;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t hidden_dim = 128;
  std::size_t output_dim = 128;
  std::size_t anchor_cap = 0;  // 0: use every minority sample for the anchor
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& config);

/// Adam moment buffers, shape-congruent with the parameters they update.
struct AdamState {
  SetConvGrads first_moment;
  SetConvGrads second_moment;
  std::size_t step = 0;
};

AdamState make_adam_state(const SetConvParams& params);

/// Support-set composition preserving the dataset imbalance ratio:
/// minority count = clamp(round(support_size * n_min / (n_min + n_maj)),
/// 1, support_size - 1), majority count the remainder.
/// Returns (majority count, minority count).
std::pair<std::size_t, std::size_t> split_support(std::size_t support_size,
                                                  std::size_t n_majority,
                                                  std::size_t n_minority);

/// Draws one episode from a two-class dataset. Per class, the query row is
/// reserved first, then support rows are drawn from the remaining rows
/// without replacement (with replacement only if the class is smaller than
/// its support share plus one, so the composition is always exact).
Episode sample_episode(const Dataset& data, const TrainConfig& config, Rng& rng);

/// Mean over the two query embeddings of -ln P(true class | query), with
/// the class probability given by the softmax over dot products against the
/// two support representatives. Computed overflow-safely.
double episode_loss(const Vector& rep_majority, const Vector& rep_minority,
                    const Vector& query_majority, const Vector& query_minority);

struct EpisodeLossGrads {
  double loss = 0.0;
  Vector rep_majority;
  Vector rep_minority;
  Vector query_majority;
  Vector query_minority;
};

/// episode_loss plus its gradient with respect to each of the four
/// embeddings.
EpisodeLossGrads episode_loss_with_grads(const Vector& rep_majority,
                                         const Vector& rep_minority,
                                         const Vector& query_majority,
                                         const Vector& query_minority);

/// One bias-corrected Adam update, in place.
void adam_step(SetConvParams& params, const SetConvGrads& grads, AdamState& state,
               const TrainConfig& config);

struct LossRecord {
  std::size_t iteration = 0;
  double loss = 0.0;
};

struct TrainResult {
  SetConvParams params;
  Anchor anchor;
  std::vector<LossRecord> loss_log;
};

/// Episodic training on a two-class dataset: at each iteration an episode
/// is sampled, all four sample sets go through the layer, the episode loss
/// is backpropagated, and Adam updates the parameters. The anchor is fixed
/// up front from the minority class. Fully deterministic given
/// (data, config): the generator seeded with config.seed drives
/// initialization, the optional anchor subsample, and every episode.
TrainResult train(const Dataset& data, const TrainConfig& config);

}  // namespace setconv
