#include "setconv/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace setconv {

namespace {

/// Proportional two-way allocation of `total` rows with a floor of one per
/// class, clamped to what each class actually has.
std::pair<std::size_t, std::size_t> post_quota(std::size_t total, std::size_t n_maj,
                                               std::size_t n_min) {
  auto q_min = static_cast<std::size_t>(
      std::llround(static_cast<double>(total) * static_cast<double>(n_min) /
                   static_cast<double>(n_maj + n_min)));
  q_min = std::clamp<std::size_t>(q_min, 1, total - 1);
  std::size_t q_maj = total - q_min;
  q_min = std::min(q_min, n_min);
  q_maj = std::min(q_maj, n_maj);
  return {q_maj, q_min};
}

}  // namespace

BinaryTrainOutput train_binary(const Dataset& data, const TrainConfig& config) {
  const BinaryRoles roles = binary_roles(data);
  TrainResult trained = train(data, config);

  BinaryTrainOutput out;
  out.model.params = std::move(trained.params);
  out.model.anchor = std::move(trained.anchor);
  out.model.majority_value = data.class_values[roles.majority_id];
  out.model.minority_value = data.class_values[roles.minority_id];
  out.model.seed = config.seed;
  out.loss_log = std::move(trained.loss_log);
  return out;
}

ClassRepresentatives post_train(const TrainedModel& model, const Dataset& train_data,
                                std::size_t s_post_size, Rng& rng) {
  if (s_post_size < 2)
    throw InvalidArgument("post_train: subset size must be >= 2");
  const BinaryRoles roles = binary_roles(train_data);
  if (train_data.class_values[roles.majority_id] != model.majority_value ||
      train_data.class_values[roles.minority_id] != model.minority_value)
    throw InvalidArgument("post_train: dataset classes do not match the model");

  const std::size_t n_maj = train_data.class_counts[roles.majority_id];
  const std::size_t n_min = train_data.class_counts[roles.minority_id];
  const std::size_t total = std::min(s_post_size, n_maj + n_min);
  const auto [q_maj, q_min] = post_quota(total, n_maj, n_min);

  const auto draw = [&rng, &train_data](int class_id, std::size_t quota) {
    const auto rows = train_data.indices_of_class(class_id);
    const auto picked = rng.sample_distinct(rows.size(), quota);
    std::vector<std::size_t> selected(quota);
    for (std::size_t i = 0; i < quota; ++i) selected[i] = rows[picked[i]];
    return take_rows(train_data.features, selected);
  };

  ClassRepresentatives reps;
  reps.majority = setconv_forward(draw(roles.majority_id, q_maj), model.params,
                                  model.anchor);
  reps.minority = setconv_forward(draw(roles.minority_id, q_min), model.params,
                                  model.anchor);
  return reps;
}

Vector embed(const Vector& x, const TrainedModel& model) {
  return setconv_forward(from_row(x), model.params, model.anchor);
}

std::pair<double, double> predict_proba_binary(const Vector& x,
                                               const TrainedModel& model,
                                               const ClassRepresentatives& reps) {
  const Vector e = embed(x, model);
  const double z_maj = dot(e, reps.majority);
  const double z_min = dot(e, reps.minority);
  const double m = std::max(z_maj, z_min);
  const double e_maj = std::exp(z_maj - m);
  const double e_min = std::exp(z_min - m);
  const double denom = e_maj + e_min;
  return {e_maj / denom, e_min / denom};
}

std::int64_t predict_binary(const Vector& x, const TrainedModel& model,
                            const ClassRepresentatives& reps) {
  const auto [p_maj, p_min] = predict_proba_binary(x, model, reps);
  return p_min >= p_maj ? model.minority_value : model.majority_value;
}

OneVsAllTrainOutput train_one_vs_all(const Dataset& data, const TrainConfig& config,
                                     std::size_t s_post_size) {
  if (data.num_classes() < 2)
    throw InvalidArgument("train_one_vs_all: need at least 2 classes");
  for (std::size_t c = 0; c < data.num_classes(); ++c)
    if (data.class_counts[c] < 2)
      throw DataError("train_one_vs_all: class " +
                      std::to_string(data.class_values[c]) +
                      " has fewer than 2 samples");

  OneVsAllTrainOutput out;
  out.model.class_values = data.class_values;
  out.model.class_counts = data.class_counts;
  for (std::size_t c = 0; c < data.num_classes(); ++c) {
    const Dataset head_data = relabel_one_vs_rest(data, static_cast<int>(c));

    TrainConfig head_config = config;
    head_config.seed = derive_seed(config.seed, 2 * c + 1);
    BinaryTrainOutput head_train = train_binary(head_data, head_config);

    Rng post_rng(derive_seed(config.seed, 2 * c + 2));
    ClassRepresentatives reps =
        post_train(head_train.model, head_data, s_post_size, post_rng);

    BinaryHead head;
    head.model = std::move(head_train.model);
    head.reps = std::move(reps);
    head.positive_value = data.class_values[c];
    for (const LossRecord& rec : head_train.loss_log)
      out.loss_log.push_back({head.positive_value, rec.iteration, rec.loss});
    out.model.heads.push_back(std::move(head));
  }
  return out;
}

double head_score(const Vector& x, const BinaryHead& head) {
  const auto [p_maj, p_min] = predict_proba_binary(x, head.model, head.reps);
  return head.model.minority_value == 1 ? p_min : p_maj;
}

MulticlassPrediction predict_multiclass(const Vector& x, const OneVsAllModel& model) {
  if (model.heads.empty())
    throw InvalidArgument("predict_multiclass: model has no heads");
  MulticlassPrediction out;
  out.scores.reserve(model.heads.size());
  std::size_t best = 0;
  for (std::size_t c = 0; c < model.heads.size(); ++c) {
    out.scores.push_back(head_score(x, model.heads[c]));
    if (out.scores[c] > out.scores[best]) best = c;
  }
  out.label = model.heads[best].positive_value;
  return out;
}

}  // namespace setconv
