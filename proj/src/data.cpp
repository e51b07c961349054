#include "setconv/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace setconv {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, std::size_t line_no,
                    const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value))
    throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                    "': not a finite number: '" + field + "'");
  return value;
}

std::int64_t parse_label(const std::string& field, std::size_t line_no,
                         const std::string& column) {
  std::int64_t value = 0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last)
    throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                    "': not an integer label: '" + field + "'");
  return value;
}

struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // data rows, field-split
  std::vector<std::size_t> line_numbers;       // 1-based source line per row
};

ParsedCsv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  ParsedCsv csv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (csv.header.empty()) {
      csv.header = std::move(fields);
    } else {
      if (fields.size() != csv.header.size())
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(csv.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
      csv.rows.push_back(std::move(fields));
      csv.line_numbers.push_back(line_no);
    }
  }
  if (csv.header.empty()) throw DataError("empty input: " + path);
  if (csv.rows.empty()) throw DataError("no data rows in: " + path);
  return csv;
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name) {
  std::size_t found = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      if (found != header.size())
        throw DataError("duplicate column name: '" + name + "'");
      found = i;
    }
  }
  if (found == header.size())
    throw DataError("column '" + name + "' not found in header");
  return found;
}

}  // namespace

std::vector<std::size_t> Dataset::indices_of_class(int class_id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == class_id) out.push_back(i);
  return out;
}

Matrix Dataset::rows_of_class(int class_id) const {
  const auto idx = indices_of_class(class_id);
  return setconv::take_rows(features, idx);
}

Dataset make_dataset(Matrix features, const std::vector<std::int64_t>& labels_raw) {
  if (features.rows() != labels_raw.size())
    throw DimensionError("make_dataset: " + std::to_string(features.rows()) +
                         " feature rows vs " + std::to_string(labels_raw.size()) +
                         " labels");
  if (features.rows() == 0) throw InvalidArgument("make_dataset: empty dataset");

  std::map<std::int64_t, std::size_t> counts;
  for (std::int64_t v : labels_raw) ++counts[v];

  Dataset out;
  out.features = std::move(features);
  std::map<std::int64_t, int> id_of;
  for (const auto& [value, count] : counts) {
    id_of[value] = static_cast<int>(out.class_values.size());
    out.class_values.push_back(value);
    out.class_counts.push_back(count);
  }
  out.labels.reserve(labels_raw.size());
  for (std::int64_t v : labels_raw) out.labels.push_back(id_of[v]);
  return out;
}

BinaryRoles binary_roles(const Dataset& data) {
  if (data.num_classes() != 2)
    throw InvalidArgument("binary_roles: dataset has " +
                          std::to_string(data.num_classes()) +
                          " classes, expected 2");
  BinaryRoles roles;
  if (data.class_counts[0] >= data.class_counts[1]) {
    roles.majority_id = 0;
    roles.minority_id = 1;
  } else {
    roles.majority_id = 1;
    roles.minority_id = 0;
  }
  return roles;
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
  const ParsedCsv csv = read_csv(path);
  const std::size_t label_idx = find_column(csv.header, label_column);
  if (csv.header.size() < 2)
    throw DataError("no feature columns besides label in: " + path);

  const std::size_t d = csv.header.size() - 1;
  Matrix features(csv.rows.size(), d);
  std::vector<std::int64_t> labels_raw(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& fields = csv.rows[r];
    const std::size_t line_no = csv.line_numbers[r];
    std::size_t c = 0;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (f == label_idx) {
        labels_raw[r] = parse_label(fields[f], line_no, csv.header[f]);
      } else {
        features(r, c++) = parse_double(fields[f], line_no, csv.header[f]);
      }
    }
  }
  return make_dataset(std::move(features), labels_raw);
}

Matrix load_feature_csv(const std::string& path, const std::string& drop_column) {
  const ParsedCsv csv = read_csv(path);
  std::size_t drop_idx = csv.header.size();  // sentinel: keep everything
  if (!drop_column.empty()) {
    for (std::size_t i = 0; i < csv.header.size(); ++i)
      if (csv.header[i] == drop_column) drop_idx = i;
  }
  const std::size_t d = csv.header.size() - (drop_idx < csv.header.size() ? 1 : 0);
  if (d == 0) throw DataError("no feature columns in: " + path);

  Matrix features(csv.rows.size(), d);
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    std::size_t c = 0;
    for (std::size_t f = 0; f < csv.rows[r].size(); ++f) {
      if (f == drop_idx) continue;
      features(r, c++) =
          parse_double(csv.rows[r][f], csv.line_numbers[r], csv.header[f]);
    }
  }
  return features;
}

std::string dataset_to_csv(const Dataset& data, const std::string& label_column) {
  std::ostringstream out;
  for (std::size_t c = 0; c < data.dim(); ++c) out << "f" << c << ",";
  out << label_column << "\n";
  for (std::size_t r = 0; r < data.n(); ++r) {
    for (std::size_t c = 0; c < data.dim(); ++c)
      out << format_double(data.features(r, c)) << ",";
    out << data.class_values[data.labels[r]] << "\n";
  }
  return out.str();
}

void save_csv(const Dataset& data, const std::string& path,
              const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << dataset_to_csv(data, label_column);
  if (!out) throw IoError("write failed: " + path);
}

SplitResult split(const Dataset& data, double train_ratio, Rng& rng) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0))
    throw InvalidArgument("split: ratio must be in (0,1), got " +
                          format_double(train_ratio));
  for (std::size_t c = 0; c < data.num_classes(); ++c)
    if (data.class_counts[c] < 2)
      throw InvalidArgument("split: class " + std::to_string(data.class_values[c]) +
                            " has fewer than 2 samples");

  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t c = 0; c < data.num_classes(); ++c) {
    auto idx = data.indices_of_class(static_cast<int>(c));
    rng.shuffle(idx);
    const std::size_t n_c = idx.size();
    std::size_t k = static_cast<std::size_t>(
        std::llround(train_ratio * static_cast<double>(n_c)));
    k = std::clamp<std::size_t>(k, 1, n_c - 1);
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    test_idx.insert(test_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
  }

  SplitResult out;
  out.train = take_rows(data, train_idx);
  out.test = take_rows(data, test_idx);
  out.train_indices = std::move(train_idx);
  out.test_indices = std::move(test_idx);
  return out;
}

Dataset generate_synthetic(const SynthSpec& spec) {
  if (spec.dim == 0 || spec.classes.empty())
    throw InvalidArgument("generate_synthetic: empty spec");
  std::size_t total = 0;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    const auto& cls = spec.classes[c];
    if (cls.count < 2)
      throw InvalidArgument("generate_synthetic: class " + std::to_string(c) +
                            " needs at least 2 samples");
    if (cls.mean.size() != spec.dim)
      throw DimensionError("generate_synthetic: class " + std::to_string(c) +
                           " mean has dimension " + std::to_string(cls.mean.size()) +
                           ", expected " + std::to_string(spec.dim));
    if (!(cls.stddev > 0.0))
      throw InvalidArgument("generate_synthetic: stddev must be positive");
    total += cls.count;
  }

  Rng rng(spec.seed);
  Matrix features(total, spec.dim);
  std::vector<std::int64_t> labels_raw(total);
  std::size_t r = 0;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    const auto& cls = spec.classes[c];
    for (std::size_t i = 0; i < cls.count; ++i, ++r) {
      for (std::size_t j = 0; j < spec.dim; ++j)
        features(r, j) = cls.mean[j] + cls.stddev * rng.normal();
      labels_raw[r] = static_cast<std::int64_t>(c);
    }
  }
  return make_dataset(std::move(features), labels_raw);
}

Dataset relabel_one_vs_rest(const Dataset& data, int positive_class_id) {
  if (positive_class_id < 0 ||
      static_cast<std::size_t>(positive_class_id) >= data.num_classes())
    throw InvalidArgument("relabel_one_vs_rest: class id out of range");
  std::vector<std::int64_t> labels_raw(data.n());
  for (std::size_t i = 0; i < data.n(); ++i)
    labels_raw[i] = data.labels[i] == positive_class_id ? 1 : 0;
  return make_dataset(data.features, labels_raw);
}

Dataset take_rows(const Dataset& data, std::span<const std::size_t> idx) {
  Matrix features = take_rows(data.features, idx);
  std::vector<std::int64_t> labels_raw(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    labels_raw[i] = data.class_values[data.labels[idx[i]]];
  return make_dataset(std::move(features), labels_raw);
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace setconv
