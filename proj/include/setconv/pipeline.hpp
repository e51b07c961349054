#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "setconv/episodic.hpp"
#include "setconv/metrics.hpp"
#include "setconv/model_io.hpp"

namespace setconv {

/// Command-level entry points used by the CLI binary and by the test
/// suites. Every command is deterministic given identical options, and all
/// output files are written atomically (temp file + rename).

struct SynthOptions {
  std::vector<std::size_t> counts;  // one per class
  std::size_t dim = 16;
  double separation = 4.0;  // pairwise distance between any two class means
  double stddev = 1.0;
  std::uint64_t seed = 0;
  std::string out_path;
};

struct SynthSummary {
  std::vector<std::size_t> counts;
  double imbalance_ratio = 1.0;  // largest class count / smallest
};

/// Writes a synthetic Gaussian dataset as CSV. Class means are placed at
/// equal pairwise distances (`separation`), spread across all feature axes:
/// two classes sit at +-separation/2 along the normalized all-ones
/// direction, more classes on scaled orthonormal cosine-basis vectors
/// (requires #classes <= dim).
SynthSummary run_synth(const SynthOptions& options);

struct TrainOptions {
  std::string data_path;
  std::string label_column = "label";
  std::string mode = "binary";  // "binary" | "multiclass"
  TrainConfig config;
  std::size_t s_post = 1000;
  double split_ratio = 0.7;
  std::string model_out;
  std::string loss_out;  // empty: model_out + ".loss.csv"
};

struct TrainSummary {
  double final_loss = 0.0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

/// Full training pipeline: load CSV, stratified split (the held-out indices
/// are recorded in the model file), episodic training, one post-training
/// pass, model + loss-log emission. Sub-streams of the run seed: 1 for the
/// split, 2 for binary post-training; one-vs-rest heads derive their own
/// streams (see train_one_vs_all).
TrainSummary run_train(const TrainOptions& options);

struct EvalOptions {
  std::string model_path;
  std::string data_path;
  std::string label_column;  // empty: the column recorded in the model
  std::string subset = "test";  // "test" | "train" | "all"
  std::string report_out;    // empty: no report file
};

/// Per-class metric rows: the minority class for binary models, every
/// class except the training majority for multiclass models.
std::vector<ClassReport> run_eval(const EvalOptions& options);

struct PredictOptions {
  std::string model_path;
  std::string data_path;
  std::string label_column;  // optional column to drop from the input
  std::string out_path;
};

/// Writes one row per input: predicted label plus per-class scores.
/// Returns the number of rows written.
std::size_t run_predict(const PredictOptions& options);

/// Predictions and per-class scores for a labeled dataset; shared by
/// run_eval and the acceptance suite.
struct ScoredPredictions {
  std::vector<std::int64_t> predicted;           // per row
  std::vector<std::vector<double>> scores;       // per row, per class ascending
  std::vector<std::int64_t> class_values;        // ascending
};
ScoredPredictions score_dataset(const ModelFile& model, const Matrix& features);

std::vector<ClassReport> evaluate_predictions(const ModelFile& model,
                                              const Dataset& data,
                                              const ScoredPredictions& scored);

void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace setconv
