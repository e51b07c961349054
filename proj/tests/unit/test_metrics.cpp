#include <cmath>

#include <doctest.h>

#include "setconv/metrics.hpp"
#include "setconv/rng.hpp"

using namespace setconv;

namespace {

/// Quadratic-time rank statistic: (#{pos > neg} + 0.5 #{ties}) / (np * nn).
double auc_pairwise(const std::vector<std::int64_t>& labels,
                    const std::vector<double>& scores, std::int64_t positive) {
  double wins = 0.0;
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != positive) continue;
    ++np;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] == positive) continue;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  for (std::int64_t v : labels) nn += (v != positive) ? 1 : 0;
  return wins / (static_cast<double>(np) * static_cast<double>(nn));
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("confusion counting") {
  const std::vector<std::int64_t> labels{1, 1, 0};
  const std::vector<std::int64_t> preds{1, 0, 0};
  const ConfusionMatrix cm = confusion(labels, preds, 1);
  CHECK(cm.tp == 1);
  CHECK(cm.fn == 1);
  CHECK(cm.fp == 0);
  CHECK(cm.tn == 1);
  CHECK(cm.total() == 3);

  const ConfusionMatrix perfect = confusion(labels, labels, 1);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);

  CHECK_THROWS_AS(confusion(labels, std::vector<std::int64_t>{1}, 1),
                  DimensionError);
  CHECK_THROWS_AS(confusion(std::vector<std::int64_t>{},
                            std::vector<std::int64_t>{}, 1),
                  InvalidArgument);
}

TEST_CASE("confusion matches a loop-count oracle on random pairs") {
  Rng rng(71);
  std::vector<std::int64_t> labels(1000), preds(1000);
  for (std::size_t i = 0; i < 1000; ++i) {
    labels[i] = static_cast<std::int64_t>(rng.below(3));
    preds[i] = static_cast<std::int64_t>(rng.below(3));
  }
  for (std::int64_t pos = 0; pos < 3; ++pos) {
    const ConfusionMatrix cm = confusion(labels, preds, pos);
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      if (labels[i] == pos && preds[i] == pos) ++tp;
      if (labels[i] != pos && preds[i] == pos) ++fp;
      if (labels[i] == pos && preds[i] != pos) ++fn;
      if (labels[i] != pos && preds[i] != pos) ++tn;
    }
    CHECK(cm.tp == tp);
    CHECK(cm.fp == fp);
    CHECK(cm.fn == fn);
    CHECK(cm.tn == tn);
    CHECK(cm.total() == 1000);
  }
}

TEST_CASE("metric formulas on a worked example") {
  const ConfusionMatrix cm{9, 2, 1, 8};
  CHECK(sensitivity(cm).value == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(specificity(cm).value == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(f1_score(cm).value == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(g_mean(cm).value == doctest::Approx(std::sqrt(0.72)).epsilon(1e-12));
  CHECK_FALSE(sensitivity(cm).degenerate);
  CHECK_FALSE(f1_score(cm).degenerate);
}

TEST_CASE("perfect classifier scores one everywhere") {
  const ConfusionMatrix cm{10, 0, 0, 90};
  CHECK(specificity(cm).value == 1.0);
  CHECK(sensitivity(cm).value == 1.0);
  CHECK(f1_score(cm).value == 1.0);
  CHECK(g_mean(cm).value == 1.0);
}

TEST_CASE("zero sensitivity forces zero g-mean") {
  const ConfusionMatrix cm{0, 3, 7, 90};
  CHECK(sensitivity(cm).value == 0.0);
  CHECK(g_mean(cm).value == 0.0);
  CHECK_FALSE(g_mean(cm).degenerate);
}

TEST_CASE("degenerate denominators flag and return zero") {
  const ConfusionMatrix no_neg{5, 0, 2, 0};
  CHECK(specificity(no_neg).value == 0.0);
  CHECK(specificity(no_neg).degenerate);
  CHECK(g_mean(no_neg).degenerate);

  const ConfusionMatrix no_pos{0, 4, 0, 6};
  CHECK(sensitivity(no_pos).value == 0.0);
  CHECK(sensitivity(no_pos).degenerate);

  const ConfusionMatrix all_tn{0, 0, 0, 10};
  CHECK(f1_score(all_tn).value == 0.0);
  CHECK(f1_score(all_tn).degenerate);

  const ConfusionMatrix zero_f1{0, 3, 2, 5};
  CHECK(f1_score(zero_f1).value == 0.0);
  CHECK(f1_score(zero_f1).degenerate);
}

TEST_CASE("g_mean squared equals spec times sens") {
  Rng rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    const ConfusionMatrix cm{rng.below(50), rng.below(50), rng.below(50),
                             1 + rng.below(50)};
    const double g = g_mean(cm).value;
    CHECK(std::abs(g * g - specificity(cm).value * sensitivity(cm).value) <= 1e-12);
    CHECK(g <= std::max(specificity(cm).value, sensitivity(cm).value) + 1e-15);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
  }
}

TEST_CASE("auc perfect separation and all-ties") {
  const std::vector<std::int64_t> labels{1, 1, 0, 0};
  CHECK(auc(labels, std::vector<double>{0.9, 0.8, 0.3, 0.1}, 1) == 1.0);
  CHECK(auc(labels, std::vector<double>{0.5, 0.5, 0.5, 0.5}, 1) == 0.5);
  CHECK(auc(labels, std::vector<double>{0.1, 0.2, 0.8, 0.9}, 1) == 0.0);
}

TEST_CASE("auc rejects single-class input") {
  CHECK_THROWS_AS(auc(std::vector<std::int64_t>{1, 1}, std::vector<double>{0.1, 0.2}, 1),
                  UndefinedMetricError);
  CHECK_THROWS_AS(auc(std::vector<std::int64_t>{}, std::vector<double>{}, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(auc(std::vector<std::int64_t>{1}, std::vector<double>{0.1, 0.2}, 1),
                  DimensionError);
}

TEST_CASE("auc matches the pairwise oracle with heavy ties") {
  Rng rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + rng.below(481);
    std::vector<std::int64_t> labels(n);
    std::vector<double> scores(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<std::int64_t>(rng.below(2));
      has_pos |= labels[i] == 1;
      has_neg |= labels[i] == 0;
      // Quantized scores to force plenty of exact ties.
      scores[i] = static_cast<double>(rng.below(12)) / 11.0;
    }
    if (!has_pos || !has_neg) continue;
    CHECK(std::abs(auc(labels, scores, 1) - auc_pairwise(labels, scores, 1)) <=
          1e-12);
  }
}

TEST_CASE("auc negation symmetry and monotone-transform invariance") {
  Rng rng(83);
  std::vector<std::int64_t> labels(200);
  std::vector<double> scores(200);
  for (std::size_t i = 0; i < 200; ++i) {
    labels[i] = static_cast<std::int64_t>(rng.below(2));
    scores[i] = rng.uniform(-4.0, 4.0);
  }
  labels[0] = 1;
  labels[1] = 0;

  std::vector<double> negated(200), transformed(200);
  for (std::size_t i = 0; i < 200; ++i) {
    negated[i] = -scores[i];
    transformed[i] = std::exp(0.5 * scores[i]) + 3.0;  // strictly increasing
  }
  const double base = auc(labels, scores, 1);
  CHECK(std::abs(base - (1.0 - auc(labels, negated, 1))) <= 1e-12);
  CHECK(auc(labels, transformed, 1) == base);
}

TEST_CASE("report serialization carries one row per class") {
  std::vector<ClassReport> rows;
  rows.push_back(make_class_report(1, ConfusionMatrix{9, 2, 1, 8}, 0.97));
  rows.push_back(make_class_report(2, ConfusionMatrix{0, 0, 5, 15}, 0.5));
  const std::string csv = report_to_csv(rows);
  CHECK(csv.find("class,tp,fp,fn,tn,") == 0);
  CHECK(csv.find("\n1,9,2,1,8,0.8,0.9,") != std::string::npos);
  CHECK(csv.find("\n2,0,0,5,15,1,0,0,0,0.5,f1") != std::string::npos);

  const std::string table = report_to_table(rows);
  CHECK(table.find("g-mean") != std::string::npos);
}

TEST_SUITE_END();
