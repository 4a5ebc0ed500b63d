#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"
#include "roced/meta.hpp"

namespace roced {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(Label truth, Label predicted) noexcept {
    if (truth == Label::positive)
      ++(predicted == Label::positive ? tp : fn);
    else
      ++(predicted == Label::positive ? fp : tn);
  }
  std::size_t positives() const noexcept { return tp + fn; }
  std::size_t negatives() const noexcept { return tn + fp; }
};

// 0 when there are neither positives nor positive predictions.
inline double f1(const ConfusionCounts& c) noexcept {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

inline double gmean(const ConfusionCounts& c) {
  if (c.positives() == 0 || c.negatives() == 0)
    throw Error("gmean: both classes must be present in the test fold");
  const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.positives());
  const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.negatives());
  return std::sqrt(tpr * tnr);
}

enum class Metric { f1, gmean };

constexpr const char* to_string(Metric m) noexcept { return m == Metric::f1 ? "F1" : "G-mean"; }

// One technique's per-dataset scores (means over folds), aligned to `datasets`.
struct TechniqueScores {
  std::string technique;
  std::vector<std::string> datasets;
  std::vector<double> f1;
  std::vector<double> gmean;

  const std::vector<double>& values(Metric m) const noexcept { return m == Metric::f1 ? f1 : gmean; }
};

namespace detail {

inline void check_coverage(std::span<const TechniqueScores> scores) {
  if (scores.empty()) throw Error("no techniques to compare");
  const auto& ref = scores.front();
  for (const auto& s : scores) {
    if (s.datasets != ref.datasets || s.f1.size() != ref.datasets.size() ||
        s.gmean.size() != ref.datasets.size())
      throw Error("technique '" + s.technique + "' does not cover the same datasets as '" +
                  ref.technique + "'");
  }
}

// Average ranks (1 = smallest) with ties sharing the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

// Mean over datasets of each technique's rank (1 = highest metric).
inline std::vector<double> mean_ranks(std::span<const TechniqueScores> scores, Metric metric) {
  detail::check_coverage(scores);
  const std::size_t n_sets = scores.front().datasets.size();
  std::vector<double> total(scores.size(), 0.0);
  std::vector<double> column(scores.size());
  for (std::size_t d = 0; d < n_sets; ++d) {
    for (std::size_t t = 0; t < scores.size(); ++t) column[t] = -scores[t].values(metric)[d];
    const auto r = detail::average_ranks(column);
    for (std::size_t t = 0; t < scores.size(); ++t) total[t] += r[t];
  }
  for (double& v : total) v = n_sets ? v / static_cast<double>(n_sets) : 0.0;
  return total;
}

// Count of first places over every (dataset, metric) cell; a first place shared
// by t techniques is worth 1/t to each.
inline std::vector<double> wins(std::span<const TechniqueScores> scores,
                                std::span<const Metric> metrics = {}) {
  detail::check_coverage(scores);
  static constexpr Metric both[] = {Metric::f1, Metric::gmean};
  if (metrics.empty()) metrics = both;
  std::vector<double> total(scores.size(), 0.0);
  for (Metric m : metrics) {
    for (std::size_t d = 0; d < scores.front().datasets.size(); ++d) {
      double best = -INFINITY;
      for (const auto& s : scores) best = std::max(best, s.values(m)[d]);
      std::size_t tied = 0;
      for (const auto& s : scores) tied += s.values(m)[d] == best;
      for (std::size_t t = 0; t < scores.size(); ++t)
        if (scores[t].values(m)[d] == best) total[t] += 1.0 / static_cast<double>(tied);
    }
  }
  return total;
}

inline constexpr double kSafeThreshold = 50.0;

// Splits dataset characterizations into safe (S% >= 50) and unsafe groups.
inline std::pair<std::vector<DatasetMeta>, std::vector<DatasetMeta>> group_split(
    std::span<const DatasetMeta> metas) {
  std::pair<std::vector<DatasetMeta>, std::vector<DatasetMeta>> out;
  for (const auto& m : metas) (m.safe_pct >= kSafeThreshold ? out.first : out.second).push_back(m);
  return out;
}

// Share of queries whose complete removal sequences differ.
inline double divergence_fraction(std::span<const std::vector<std::size_t>> proposed,
                                  std::span<const std::vector<std::size_t>> baseline) {
  if (proposed.size() != baseline.size()) throw Error("divergence: traces are not paired");
  if (proposed.empty()) return 0.0;
  std::size_t differ = 0;
  for (std::size_t q = 0; q < proposed.size(); ++q) differ += proposed[q] != baseline[q];
  return static_cast<double>(differ) / static_cast<double>(proposed.size());
}

}  // namespace roced
