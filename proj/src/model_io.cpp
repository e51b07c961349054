#include "setconv/model_io.hpp"

#include <bit>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace setconv {

namespace {

using nlohmann::json;

constexpr char kHexDigits[] = "0123456789abcdef";

std::string encode_f64(std::span<const double> values) {
  std::string out;
  out.reserve(values.size() * 16);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      const auto b = static_cast<unsigned>((bits >> (8 * byte)) & 0xffu);
      out.push_back(kHexDigits[b >> 4]);
      out.push_back(kHexDigits[b & 0xfu]);
    }
  }
  return out;
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::vector<double> decode_f64(const std::string& hex, std::size_t expected,
                               const std::string& field) {
  if (hex.size() != expected * 16)
    throw DimensionError("model file: array '" + field + "' holds " +
                         std::to_string(hex.size() / 16) + " values, expected " +
                         std::to_string(expected));
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint64_t bits = 0;
    for (int byte = 0; byte < 8; ++byte) {
      const int hi = hex_nibble(hex[i * 16 + 2 * byte]);
      const int lo = hex_nibble(hex[i * 16 + 2 * byte + 1]);
      if (hi < 0 || lo < 0)
        throw FormatError("model file: array '" + field + "' is not valid hex");
      bits |= static_cast<std::uint64_t>((hi << 4) | lo) << (8 * byte);
    }
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

json head_to_json(const TrainedModel& model, const ClassRepresentatives& reps) {
  const SetConvParams& p = model.params;
  json j;
  j["input_dim"] = p.input_dim;
  j["hidden_dim"] = p.hidden_dim;
  j["output_dim"] = p.output_dim;
  j["majority_value"] = model.majority_value;
  j["minority_value"] = model.minority_value;
  j["seed"] = model.seed;
  j["attention"] = encode_f64({p.attention.data(), p.attention.size()});
  j["hidden_weights"] =
      encode_f64({p.mlp.hidden_weights.data(), p.mlp.hidden_weights.size()});
  j["hidden_bias"] = encode_f64(p.mlp.hidden_bias);
  j["output_weights"] =
      encode_f64({p.mlp.output_weights.data(), p.mlp.output_weights.size()});
  j["output_bias"] = encode_f64(p.mlp.output_bias);
  j["anchor"] = encode_f64(model.anchor.values);
  j["representative_majority"] = encode_f64(reps.majority);
  j["representative_minority"] = encode_f64(reps.minority);
  return j;
}

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string("model file: missing key '") + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("model file: bad value for key '") + key + "'");
  }
}

Matrix decode_matrix(const json& j, const char* key, std::size_t rows,
                     std::size_t cols) {
  const auto flat = decode_f64(get_as<std::string>(j, key), rows * cols, key);
  Matrix m(rows, cols);
  std::copy(flat.begin(), flat.end(), m.data());
  return m;
}

BinaryModel head_from_json(const json& j) {
  BinaryModel out;
  TrainedModel& model = out.model;
  SetConvParams& p = model.params;
  p.input_dim = get_as<std::size_t>(j, "input_dim");
  p.hidden_dim = get_as<std::size_t>(j, "hidden_dim");
  p.output_dim = get_as<std::size_t>(j, "output_dim");
  if (p.input_dim == 0 || p.hidden_dim == 0 || p.output_dim == 0)
    throw DimensionError("model file: zero dimension in head");
  model.majority_value = get_as<std::int64_t>(j, "majority_value");
  model.minority_value = get_as<std::int64_t>(j, "minority_value");
  model.seed = get_as<std::uint64_t>(j, "seed");
  p.attention = decode_matrix(j, "attention", p.input_dim, p.output_dim);
  p.mlp.hidden_weights = decode_matrix(j, "hidden_weights", p.input_dim, p.hidden_dim);
  p.mlp.hidden_bias =
      decode_f64(get_as<std::string>(j, "hidden_bias"), p.hidden_dim, "hidden_bias");
  p.mlp.output_weights =
      decode_matrix(j, "output_weights", p.hidden_dim, p.output_dim);
  p.mlp.output_bias =
      decode_f64(get_as<std::string>(j, "output_bias"), p.output_dim, "output_bias");
  model.anchor.values =
      decode_f64(get_as<std::string>(j, "anchor"), p.input_dim, "anchor");
  out.reps.majority = decode_f64(get_as<std::string>(j, "representative_majority"),
                                 p.output_dim, "representative_majority");
  out.reps.minority = decode_f64(get_as<std::string>(j, "representative_minority"),
                                 p.output_dim, "representative_minority");
  return out;
}

}  // namespace

std::size_t ModelFile::feature_dim() const {
  if (binary) return binary->model.params.input_dim;
  if (multiclass && !multiclass->heads.empty())
    return multiclass->heads.front().model.params.input_dim;
  return 0;
}

void save_model(const ModelFile& model, const std::string& path) {
  json j;
  j["format"] = "setconv-model";
  j["version"] = kModelFormatVersion;
  j["byte_order"] = "little-endian";
  j["mode"] = model.mode;
  j["label_column"] = model.label_column;
  j["seed"] = model.seed;
  j["split"] = {{"dataset_rows", model.split.dataset_rows},
                {"test_indices", model.split.test_indices}};
  if (model.mode == "binary") {
    if (!model.binary) throw InvalidArgument("save_model: binary payload missing");
    j["model"] = head_to_json(model.binary->model, model.binary->reps);
  } else if (model.mode == "multiclass") {
    if (!model.multiclass)
      throw InvalidArgument("save_model: multiclass payload missing");
    j["class_values"] = model.multiclass->class_values;
    j["class_counts"] = model.multiclass->class_counts;
    json heads = json::array();
    for (const BinaryHead& head : model.multiclass->heads) {
      json h = head_to_json(head.model, head.reps);
      h["positive_value"] = head.positive_value;
      heads.push_back(std::move(h));
    }
    j["heads"] = std::move(heads);
  } else {
    throw InvalidArgument("save_model: unknown mode '" + model.mode + "'");
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + tmp);
    out << j.dump(1) << "\n";
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("model file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || get_as<std::string>(j, "format") != "setconv-model")
    throw FormatError("not a setconv model file: " + path);
  const int version = get_as<int>(j, "version");
  if (version != kModelFormatVersion)
    throw VersionError("model file version " + std::to_string(version) +
                       " unsupported (expected " +
                       std::to_string(kModelFormatVersion) + ")");

  ModelFile out;
  out.mode = get_as<std::string>(j, "mode");
  out.label_column = get_as<std::string>(j, "label_column");
  out.seed = get_as<std::uint64_t>(j, "seed");
  const json& split = require(j, "split");
  out.split.dataset_rows = get_as<std::size_t>(split, "dataset_rows");
  out.split.test_indices = get_as<std::vector<std::size_t>>(split, "test_indices");

  if (out.mode == "binary") {
    out.binary = head_from_json(require(j, "model"));
  } else if (out.mode == "multiclass") {
    OneVsAllModel ova;
    ova.class_values = get_as<std::vector<std::int64_t>>(j, "class_values");
    ova.class_counts = get_as<std::vector<std::size_t>>(j, "class_counts");
    const json& heads = require(j, "heads");
    if (!heads.is_array() || heads.size() != ova.class_values.size())
      throw FormatError("model file: head count does not match class_values");
    for (std::size_t c = 0; c < heads.size(); ++c) {
      BinaryModel bm = head_from_json(heads[c]);
      BinaryHead head;
      head.model = std::move(bm.model);
      head.reps = std::move(bm.reps);
      head.positive_value = get_as<std::int64_t>(heads[c], "positive_value");
      if (head.positive_value != ova.class_values[c])
        throw FormatError("model file: heads are not in class_values order");
      ova.heads.push_back(std::move(head));
    }
    if (ova.heads.size() > 1) {
      const std::size_t d = ova.heads.front().model.params.input_dim;
      for (const BinaryHead& head : ova.heads)
        if (head.model.params.input_dim != d)
          throw DimensionError("model file: heads disagree on feature dimension");
    }
    out.multiclass = std::move(ova);
  } else {
    throw FormatError("model file: unknown mode '" + out.mode + "'");
  }
  return out;
}

}  // namespace setconv
