#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "setconv/linalg.hpp"
#include "setconv/rng.hpp"

namespace setconv {

/// Labeled collection of fixed-dimension feature vectors. Labels are stored
/// as canonical class ids 0..C-1; class_values maps each id back to the
/// label value found in the source file (ascending order).
struct Dataset {
  Matrix features;                         // n x d
  std::vector<int> labels;                 // canonical ids, length n
  std::vector<std::int64_t> class_values;  // ascending originals, length C
  std::vector<std::size_t> class_counts;   // length C, sums to n

  std::size_t n() const { return features.rows(); }
  std::size_t dim() const { return features.cols(); }
  std::size_t num_classes() const { return class_values.size(); }

  std::vector<std::size_t> indices_of_class(int class_id) const;
  Matrix rows_of_class(int class_id) const;
};

/// Rebuilds class_values/class_counts from features+labels (raw label
/// values in `labels_raw`) and validates the invariants.
Dataset make_dataset(Matrix features, const std::vector<std::int64_t>& labels_raw);

/// Majority/minority assignment for a two-class dataset: the class with
/// more samples is the majority; on a tie the lower class value is the
/// majority.
struct BinaryRoles {
  int majority_id = 0;
  int minority_id = 1;
};
BinaryRoles binary_roles(const Dataset& data);

/// CSV ingestion: UTF-8, comma-delimited, header row required, one label
/// column named by `label_column` (integer values), all other columns are
/// numeric features in header order.
Dataset load_csv(const std::string& path, const std::string& label_column);

/// Feature-only CSV (for prediction inputs). If `drop_column` is non-empty
/// and present in the header, that column is ignored.
Matrix load_feature_csv(const std::string& path, const std::string& drop_column = "");

/// CSV text with feature columns f0..f{d-1} plus the label column, full
/// round-trip decimal precision.
std::string dataset_to_csv(const Dataset& data,
                           const std::string& label_column = "label");

void save_csv(const Dataset& data, const std::string& path,
              const std::string& label_column = "label");

struct SplitResult {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;  // into the source dataset
  std::vector<std::size_t> test_indices;
};

/// Stratified split: per class, train receives round(ratio * n_c) samples
/// (clamped so both sides keep at least one), selected by a seeded uniform
/// shuffle within the class. Requires every class to have >= 2 samples and
/// ratio in (0, 1).
SplitResult split(const Dataset& data, double train_ratio, Rng& rng);

struct ClassSpec {
  std::size_t count = 0;
  Vector mean;
  double stddev = 1.0;
};

struct SynthSpec {
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<ClassSpec> classes;  // class id c gets label value c
};

/// Per-class isotropic Gaussian samples with exact requested counts.
/// Sampling order is class by class, row by row, feature by feature, using
/// the Marsaglia polar transform on the fixed generator.
Dataset generate_synthetic(const SynthSpec& spec);

/// One-vs-rest relabeling: rows of `positive_class_id` become class value 1,
/// all others class value 0. Row order is preserved.
Dataset relabel_one_vs_rest(const Dataset& data, int positive_class_id);

Dataset take_rows(const Dataset& data, std::span<const std::size_t> idx);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace setconv
