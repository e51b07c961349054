#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "setconv/errors.hpp"

namespace setconv {

/// One-vs-rest counts for the class under evaluation.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion(std::span<const std::int64_t> labels,
                          std::span<const std::int64_t> predictions,
                          std::int64_t positive);

/// A rate in [0,1]. `degenerate` marks a 0/0 denominator, reported as 0
/// instead of NaN so batch reports stay total.
struct MetricValue {
  double value = 0.0;
  bool degenerate = false;
};

MetricValue specificity(const ConfusionMatrix& cm);  // TN / (TN + FP)
MetricValue sensitivity(const ConfusionMatrix& cm);  // TP / (TP + FN)
MetricValue f1_score(const ConfusionMatrix& cm);
MetricValue g_mean(const ConfusionMatrix& cm);       // sqrt(spec * sens)

/// Area under the ROC curve via the rank statistic
/// (#{pos > neg} + 0.5 * #{ties}) / (n_pos * n_neg), computed by sorting
/// with average ranks over tied scores. Throws UndefinedMetricError when
/// only one class is present.
double auc(std::span<const std::int64_t> labels, std::span<const double> scores,
           std::int64_t positive);

struct ClassReport {
  std::int64_t class_value = 0;
  ConfusionMatrix cm;
  MetricValue spec;
  MetricValue sens;
  MetricValue f1;
  MetricValue g_mean;
  double auc = 0.0;
};

ClassReport make_class_report(std::int64_t class_value, const ConfusionMatrix& cm,
                              double auc_value);

/// Machine-readable report: one CSV row per class, full-precision values.
std::string report_to_csv(std::span<const ClassReport> rows);

/// Human-readable fixed-width table.
std::string report_to_table(std::span<const ClassReport> rows);

}  // namespace setconv
