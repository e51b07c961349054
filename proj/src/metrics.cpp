#include "setconv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "setconv/data.hpp"

namespace setconv {

namespace {

MetricValue ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

}  // namespace

ConfusionMatrix confusion(std::span<const std::int64_t> labels,
                          std::span<const std::int64_t> predictions,
                          std::int64_t positive) {
  if (labels.size() != predictions.size())
    throw DimensionError("confusion: " + std::to_string(labels.size()) +
                         " labels vs " + std::to_string(predictions.size()) +
                         " predictions");
  if (labels.empty()) throw InvalidArgument("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool is_pos = labels[i] == positive;
    const bool said_pos = predictions[i] == positive;
    if (is_pos && said_pos)
      ++cm.tp;
    else if (is_pos)
      ++cm.fn;
    else if (said_pos)
      ++cm.fp;
    else
      ++cm.tn;
  }
  return cm;
}

MetricValue specificity(const ConfusionMatrix& cm) { return ratio(cm.tn, cm.tn + cm.fp); }

MetricValue sensitivity(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }

MetricValue f1_score(const ConfusionMatrix& cm) {
  const MetricValue precision = ratio(cm.tp, cm.tp + cm.fp);
  const MetricValue recall = sensitivity(cm);
  const double sum = precision.value + recall.value;
  if (precision.degenerate || recall.degenerate || sum == 0.0) return {0.0, true};
  return {2.0 * precision.value * recall.value / sum, false};
}

MetricValue g_mean(const ConfusionMatrix& cm) {
  const MetricValue spec = specificity(cm);
  const MetricValue sens = sensitivity(cm);
  return {std::sqrt(spec.value * sens.value), spec.degenerate || sens.degenerate};
}

double auc(std::span<const std::int64_t> labels, std::span<const double> scores,
           std::int64_t positive) {
  if (labels.size() != scores.size())
    throw DimensionError("auc: " + std::to_string(labels.size()) + " labels vs " +
                         std::to_string(scores.size()) + " scores");
  if (labels.empty()) throw InvalidArgument("auc: empty input");
  const std::size_t n = labels.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::size_t n_pos = 0;
  for (std::int64_t v : labels) n_pos += (v == positive) ? 1 : 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw UndefinedMetricError("auc: both classes must be present");

  // Average ranks over ties (1-based), summed over positives.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == positive) pos_rank_sum += avg_rank;
    i = j;
  }

  const double u = pos_rank_sum -
                   0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

ClassReport make_class_report(std::int64_t class_value, const ConfusionMatrix& cm,
                              double auc_value) {
  ClassReport r;
  r.class_value = class_value;
  r.cm = cm;
  r.spec = specificity(cm);
  r.sens = sensitivity(cm);
  r.f1 = f1_score(cm);
  r.g_mean = g_mean(cm);
  r.auc = auc_value;
  return r;
}

std::string report_to_csv(std::span<const ClassReport> rows) {
  std::ostringstream out;
  out << "class,tp,fp,fn,tn,specificity,sensitivity,f1,g_mean,auc,degenerate\n";
  for (const ClassReport& r : rows) {
    out << r.class_value << ',' << r.cm.tp << ',' << r.cm.fp << ',' << r.cm.fn << ','
        << r.cm.tn << ',' << format_double(r.spec.value) << ','
        << format_double(r.sens.value) << ',' << format_double(r.f1.value) << ','
        << format_double(r.g_mean.value) << ',' << format_double(r.auc) << ',';
    std::string flags;
    const auto mark = [&flags](const MetricValue& v, const char* name) {
      if (v.degenerate) {
        if (!flags.empty()) flags += ';';
        flags += name;
      }
    };
    mark(r.spec, "specificity");
    mark(r.sens, "sensitivity");
    mark(r.f1, "f1");
    mark(r.g_mean, "g_mean");
    out << flags << '\n';
  }
  return out.str();
}

std::string report_to_table(std::span<const ClassReport> rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%8s %7s %7s %7s %7s %8s %8s %8s %8s %8s\n",
                "class", "tp", "fp", "fn", "tn", "spec", "sens", "f1", "g-mean",
                "auc");
  out << line;
  for (const ClassReport& r : rows) {
    std::snprintf(line, sizeof(line),
                  "%8lld %7zu %7zu %7zu %7zu %8.4f %8.4f %8.4f %8.4f %8.4f\n",
                  static_cast<long long>(r.class_value), r.cm.tp, r.cm.fp, r.cm.fn,
                  r.cm.tn, r.spec.value, r.sens.value, r.f1.value, r.g_mean.value,
                  r.auc);
    out << line;
  }
  return out.str();
}

}  // namespace setconv
