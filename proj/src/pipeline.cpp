#include "setconv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace setconv {

namespace {

constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kPostTrainStream = 2;

std::vector<std::size_t> complement_indices(std::size_t n,
                                            const std::vector<std::size_t>& subset) {
  std::vector<bool> in_subset(n, false);
  for (std::size_t i : subset) {
    if (i >= n) throw DimensionError("recorded split index out of range");
    in_subset[i] = true;
  }
  std::vector<std::size_t> out;
  out.reserve(n - subset.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!in_subset[i]) out.push_back(i);
  return out;
}

Dataset select_subset(const ModelFile& model, const Dataset& data,
                      const std::string& subset) {
  if (subset == "all") return data;
  if (subset != "test" && subset != "train")
    throw InvalidArgument("subset must be one of: test, train, all");
  if (model.split.dataset_rows != data.n())
    throw DimensionError("model was trained on a file with " +
                         std::to_string(model.split.dataset_rows) +
                         " rows, this file has " + std::to_string(data.n()) +
                         "; use subset=all for other data");
  if (subset == "test") return take_rows(data, model.split.test_indices);
  return take_rows(data, complement_indices(data.n(), model.split.test_indices));
}

void check_feature_dim(const ModelFile& model, std::size_t data_dim) {
  if (model.feature_dim() != data_dim)
    throw DimensionError("model expects " + std::to_string(model.feature_dim()) +
                         " features, data has " + std::to_string(data_dim));
}

std::string loss_log_csv(const ModelFile& model,
                         const std::vector<LossRecord>& binary_log,
                         const std::vector<HeadLossRecord>& head_log) {
  std::ostringstream out;
  if (model.mode == "binary") {
    out << "iteration,loss\n";
    for (const LossRecord& rec : binary_log)
      out << rec.iteration << ',' << format_double(rec.loss) << '\n';
  } else {
    out << "head,iteration,loss\n";
    for (const HeadLossRecord& rec : head_log)
      out << rec.head_value << ',' << rec.iteration << ','
          << format_double(rec.loss) << '\n';
  }
  return out.str();
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + tmp);
    out << content;
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

namespace {

/// Orthonormal cosine-basis vector (DCT-II row c) of R^d.
Vector cosine_basis_row(std::size_t c, std::size_t d) {
  Vector u(d);
  if (c == 0) {
    for (std::size_t j = 0; j < d; ++j) u[j] = 1.0 / std::sqrt(double(d));
  } else {
    const double norm = std::sqrt(2.0 / double(d));
    for (std::size_t j = 0; j < d; ++j)
      u[j] = norm * std::cos(M_PI * double(c) * (2.0 * double(j) + 1.0) /
                             (2.0 * double(d)));
  }
  return u;
}

}  // namespace

SynthSummary run_synth(const SynthOptions& options) {
  if (options.counts.size() < 2)
    throw InvalidArgument("synth: need at least 2 class counts");
  if (options.counts.size() > options.dim)
    throw InvalidArgument("synth: class count exceeds feature dimension (means need "
                          "as many independent directions as classes)");
  if (options.out_path.empty()) throw InvalidArgument("synth: output path required");

  // Class means sit at equal pairwise distances (`separation`), in generic
  // position with respect to the feature axes: a two-class problem puts them
  // at +-separation/2 along the normalized all-ones direction, more classes
  // use scaled orthonormal cosine-basis vectors.
  SynthSpec spec;
  spec.dim = options.dim;
  spec.seed = options.seed;
  for (std::size_t c = 0; c < options.counts.size(); ++c) {
    ClassSpec cls;
    cls.count = options.counts[c];
    cls.stddev = options.stddev;
    if (options.counts.size() == 2) {
      const double coord =
          (c == 0 ? -0.5 : 0.5) * options.separation / std::sqrt(double(options.dim));
      cls.mean.assign(options.dim, coord);
    } else {
      cls.mean = cosine_basis_row(c, options.dim);
      for (double& v : cls.mean) v *= options.separation / std::sqrt(2.0);
    }
    spec.classes.push_back(std::move(cls));
  }

  const Dataset data = generate_synthetic(spec);
  write_text_atomic(options.out_path, dataset_to_csv(data));

  SynthSummary summary;
  summary.counts = data.class_counts;
  const auto [mn, mx] =
      std::minmax_element(data.class_counts.begin(), data.class_counts.end());
  summary.imbalance_ratio = static_cast<double>(*mx) / static_cast<double>(*mn);
  return summary;
}

TrainSummary run_train(const TrainOptions& options) {
  if (options.model_out.empty()) throw InvalidArgument("train: model path required");
  if (options.mode != "binary" && options.mode != "multiclass")
    throw InvalidArgument("train: mode must be binary or multiclass");
  validate(options.config);
  if (options.s_post < 2) throw InvalidArgument("train: s_post must be >= 2");

  const Dataset data = load_csv(options.data_path, options.label_column);
  if (options.mode == "binary" && data.num_classes() != 2)
    throw DataError("train: binary mode needs exactly 2 classes, file has " +
                    std::to_string(data.num_classes()));

  Rng split_rng(derive_seed(options.config.seed, kSplitStream));
  SplitResult parts = split(data, options.split_ratio, split_rng);

  ModelFile model;
  model.mode = options.mode;
  model.label_column = options.label_column;
  model.seed = options.config.seed;
  model.split.dataset_rows = data.n();
  model.split.test_indices = parts.test_indices;

  TrainSummary summary;
  summary.train_rows = parts.train.n();
  summary.test_rows = parts.test.n();

  std::vector<LossRecord> binary_log;
  std::vector<HeadLossRecord> head_log;
  if (options.mode == "binary") {
    BinaryTrainOutput trained = train_binary(parts.train, options.config);
    Rng post_rng(derive_seed(options.config.seed, kPostTrainStream));
    ClassRepresentatives reps =
        post_train(trained.model, parts.train, options.s_post, post_rng);
    model.binary = BinaryModel{std::move(trained.model), std::move(reps)};
    binary_log = std::move(trained.loss_log);
    summary.final_loss = binary_log.empty() ? 0.0 : binary_log.back().loss;
  } else {
    OneVsAllTrainOutput trained =
        train_one_vs_all(parts.train, options.config, options.s_post);
    head_log = std::move(trained.loss_log);
    summary.final_loss = head_log.empty() ? 0.0 : head_log.back().loss;
    model.multiclass = std::move(trained.model);
  }

  save_model(model, options.model_out);
  const std::string loss_path =
      options.loss_out.empty() ? options.model_out + ".loss.csv" : options.loss_out;
  write_text_atomic(loss_path, loss_log_csv(model, binary_log, head_log));
  return summary;
}

ScoredPredictions score_dataset(const ModelFile& model, const Matrix& features) {
  check_feature_dim(model, features.cols());
  ScoredPredictions out;
  out.predicted.reserve(features.rows());
  out.scores.reserve(features.rows());

  if (model.mode == "binary") {
    const BinaryModel& bm = *model.binary;
    const std::int64_t lo = std::min(bm.model.majority_value, bm.model.minority_value);
    const std::int64_t hi = std::max(bm.model.majority_value, bm.model.minority_value);
    out.class_values = {lo, hi};
    for (std::size_t r = 0; r < features.rows(); ++r) {
      const Vector x = row_vector(features, r);
      const auto [p_maj, p_min] = predict_proba_binary(x, bm.model, bm.reps);
      out.predicted.push_back(p_min >= p_maj ? bm.model.minority_value
                                             : bm.model.majority_value);
      if (lo == bm.model.majority_value)
        out.scores.push_back({p_maj, p_min});
      else
        out.scores.push_back({p_min, p_maj});
    }
  } else {
    const OneVsAllModel& ova = *model.multiclass;
    out.class_values = ova.class_values;
    for (std::size_t r = 0; r < features.rows(); ++r) {
      const MulticlassPrediction pred =
          predict_multiclass(row_vector(features, r), ova);
      out.predicted.push_back(pred.label);
      out.scores.push_back(pred.scores);
    }
  }
  return out;
}

std::vector<ClassReport> evaluate_predictions(const ModelFile& model,
                                              const Dataset& data,
                                              const ScoredPredictions& scored) {
  std::vector<std::int64_t> labels(data.n());
  for (std::size_t i = 0; i < data.n(); ++i)
    labels[i] = data.class_values[data.labels[i]];

  // Classes to report: the minority side for binary, every class except
  // the training majority for multiclass.
  std::vector<std::int64_t> report_classes;
  if (model.mode == "binary") {
    report_classes = {model.binary->model.minority_value};
  } else {
    const auto& counts = model.multiclass->class_counts;
    const std::size_t majority =
        std::max_element(counts.begin(), counts.end()) - counts.begin();
    for (std::size_t c = 0; c < model.multiclass->class_values.size(); ++c)
      if (c != majority)
        report_classes.push_back(model.multiclass->class_values[c]);
  }

  std::vector<ClassReport> rows;
  for (std::int64_t cls : report_classes) {
    const auto it =
        std::find(scored.class_values.begin(), scored.class_values.end(), cls);
    const std::size_t col = it - scored.class_values.begin();
    std::vector<double> cls_scores(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) cls_scores[i] = scored.scores[i][col];
    const ConfusionMatrix cm = confusion(labels, scored.predicted, cls);
    rows.push_back(make_class_report(cls, cm, auc(labels, cls_scores, cls)));
  }
  return rows;
}

std::vector<ClassReport> run_eval(const EvalOptions& options) {
  const ModelFile model = load_model(options.model_path);
  const std::string label_col =
      options.label_column.empty() ? model.label_column : options.label_column;
  const Dataset data = load_csv(options.data_path, label_col);
  check_feature_dim(model, data.dim());
  const Dataset subset = select_subset(model, data, options.subset);

  const ScoredPredictions scored = score_dataset(model, subset.features);
  std::vector<ClassReport> rows = evaluate_predictions(model, subset, scored);
  if (!options.report_out.empty())
    write_text_atomic(options.report_out, report_to_csv(rows));
  return rows;
}

std::size_t run_predict(const PredictOptions& options) {
  if (options.out_path.empty()) throw InvalidArgument("predict: output path required");
  const ModelFile model = load_model(options.model_path);
  const Matrix features = load_feature_csv(options.data_path, options.label_column);
  check_feature_dim(model, features.cols());

  const ScoredPredictions scored = score_dataset(model, features);
  std::ostringstream out;
  out << "prediction";
  for (std::int64_t v : scored.class_values) out << ",score_" << v;
  out << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    out << scored.predicted[r];
    for (double s : scored.scores[r]) out << ',' << format_double(s);
    out << '\n';
  }
  write_text_atomic(options.out_path, out.str());
  return features.rows();
}

}  // namespace setconv
