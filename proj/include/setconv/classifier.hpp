#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "setconv/data.hpp"
#include "setconv/episodic.hpp"
#include "setconv/layer.hpp"

namespace setconv {

/// Frozen result of episodic training on a two-class problem.
struct TrainedModel {
  SetConvParams params;
  Anchor anchor;
  std::int64_t majority_value = 0;  // class value with more training samples
  std::int64_t minority_value = 1;
  std::uint64_t seed = 0;

  bool operator==(const TrainedModel&) const = default;
};

/// One embedding per class, extracted once after training and used for
/// every subsequent prediction.
struct ClassRepresentatives {
  Vector majority;
  Vector minority;

  bool operator==(const ClassRepresentatives&) const = default;
};

struct BinaryModel {
  TrainedModel model;
  ClassRepresentatives reps;

  bool operator==(const BinaryModel&) const = default;
};

struct BinaryTrainOutput {
  TrainedModel model;
  std::vector<LossRecord> loss_log;
};

/// Episodic training plus role bookkeeping (which class value is the
/// majority / minority).
BinaryTrainOutput train_binary(const Dataset& data, const TrainConfig& config);

/// Extracts the per-class representatives from a sampled subset of the
/// training data: min(s_post_size, n) rows total, allocated across the two
/// classes proportionally to their frequencies (each class at least one,
/// never more than it has), drawn without replacement, and fed through the
/// layer one class at a time. Parameters are read, never updated.
ClassRepresentatives post_train(const TrainedModel& model, const Dataset& train_data,
                                std::size_t s_post_size, Rng& rng);

/// Embedding of a single sample (singleton set through the layer).
Vector embed(const Vector& x, const TrainedModel& model);

/// (p_majority, p_minority): softmax over the dot products of the embedded
/// query against the two representatives. The pair sums to 1.
std::pair<double, double> predict_proba_binary(const Vector& x,
                                               const TrainedModel& model,
                                               const ClassRepresentatives& reps);

/// Class value with the higher probability; an exact tie goes to the
/// minority class.
std::int64_t predict_binary(const Vector& x, const TrainedModel& model,
                            const ClassRepresentatives& reps);

/// One one-vs-rest binary head. `positive_value` is the original class this
/// head detects; inside the head the positive class is relabeled 1 and the
/// pooled rest 0.
struct BinaryHead {
  TrainedModel model;
  ClassRepresentatives reps;
  std::int64_t positive_value = 0;

  bool operator==(const BinaryHead&) const = default;
};

struct OneVsAllModel {
  std::vector<BinaryHead> heads;               // ascending positive_value
  std::vector<std::int64_t> class_values;      // ascending
  std::vector<std::size_t> class_counts;       // training distribution

  bool operator==(const OneVsAllModel&) const = default;
};

struct HeadLossRecord {
  std::int64_t head_value = 0;
  std::size_t iteration = 0;
  double loss = 0.0;
};

struct OneVsAllTrainOutput {
  OneVsAllModel model;
  std::vector<HeadLossRecord> loss_log;
};

/// Independent binary heads, one per class, each trained on the
/// positive-vs-rest relabeling with its own derived seed (training stream
/// 2*head_index + 1, post-training stream 2*head_index + 2 of config.seed)
/// and post-trained with the given subset size. Since the head's anchor
/// comes from its minority class, it is computed from the smaller of the
/// positive and pooled-negative sides.
OneVsAllTrainOutput train_one_vs_all(const Dataset& data, const TrainConfig& config,
                                     std::size_t s_post_size);

/// P(y = positive | x) for one head.
double head_score(const Vector& x, const BinaryHead& head);

struct MulticlassPrediction {
  std::int64_t label = 0;
  std::vector<double> scores;  // per class, ascending class value; unnormalized
};

/// Argmax over per-head scores; exact ties resolve to the lowest class
/// value.
MulticlassPrediction predict_multiclass(const Vector& x, const OneVsAllModel& model);

}  // namespace setconv
