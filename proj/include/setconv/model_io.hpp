#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setconv/classifier.hpp"

namespace setconv {

/// Which rows of the training file were held out, so evaluation can
/// reproduce the split exactly.
struct SplitRecord {
  std::size_t dataset_rows = 0;
  std::vector<std::size_t> test_indices;

  bool operator==(const SplitRecord&) const = default;
};

/// Everything the CLI persists after training.
///
/// On disk this is a versioned JSON document. Numeric parameter arrays are
/// stored as lowercase hex strings of their IEEE-754 binary64 little-endian
/// bytes (16 hex characters per value, in array order), which makes the
/// save/load round trip bit-exact. Layout:
///
///   format: "setconv-model"         version: 1
///   byte_order: "little-endian"     mode: "binary" | "multiclass"
///   label_column, seed
///   split: { dataset_rows, test_indices: [...] }
///   binary mode:     model: <head object>
///   multiclass mode: class_values: [...], class_counts: [...],
///                    heads: [<head object>...]
///
/// A head object carries input_dim / hidden_dim / output_dim, the class
/// values of the two roles, the seed, and the arrays: attention,
/// hidden_weights, hidden_bias, output_weights, output_bias, anchor,
/// representative_majority, representative_minority (plus positive_value
/// for one-vs-rest heads).
struct ModelFile {
  std::string mode;  // "binary" | "multiclass"
  std::optional<BinaryModel> binary;
  std::optional<OneVsAllModel> multiclass;
  std::string label_column = "label";
  std::uint64_t seed = 0;
  SplitRecord split;

  std::size_t feature_dim() const;
};

inline constexpr int kModelFormatVersion = 1;

/// Atomic write: the document is written to a temporary file in the target
/// directory and renamed into place.
void save_model(const ModelFile& model, const std::string& path);

/// Throws FormatError for structurally broken files, VersionError for an
/// unknown format version, DimensionError when stored array sizes do not
/// match the stored dimensions.
ModelFile load_model(const std::string& path);

}  // namespace setconv
