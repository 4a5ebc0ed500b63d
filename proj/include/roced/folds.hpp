#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"
#include "roced/rng.hpp"

namespace roced {

struct FoldSplit {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::size_t fold_id = 1;  // 1-based
};

// Stratified k-fold partition. Each class is shuffled and dealt round-robin
// over the folds, continuing where the previous class stopped, so fold sizes
// differ by at most one and per-class counts by at most one.
inline std::vector<FoldSplit> stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_folds: need k >= 2");
  // A class smaller than k leaves some test folds without it; two members are
  // enough to keep it in every training split.
  if (d.positives() < 2 || d.negatives() < 2)
    throw Error("stratified_folds: a class of '" + d.name() + "' has fewer than 2 members");
  std::vector<std::vector<std::size_t>> test(k);
  std::size_t slot = 0;
  for (Label y : {Label::positive, Label::negative}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d.label(i) == y) members.push_back(i);
    Engine rng(derive_seed(seed, static_cast<std::uint64_t>(y)));
    shuffle(members.begin(), members.end(), rng);
    for (std::size_t i : members) {
      test[slot].push_back(i);
      slot = (slot + 1) % k;
    }
  }
  std::vector<FoldSplit> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(test[f].begin(), test[f].end());
    std::vector<bool> in_test(d.size(), false);
    for (std::size_t i : test[f]) in_test[i] = true;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!in_test[i]) folds[f].train_indices.push_back(i);
    folds[f].test_indices = std::move(test[f]);
    folds[f].fold_id = f + 1;
  }
  return folds;
}

// Maps pre-split (train, test) partitions back onto row indices of `full`.
// Rows are matched by exact feature vector and label; duplicated rows are
// matched as a multiset.
inline std::vector<FoldSplit> load_keel_partitions(
    const Dataset& full, std::span<const std::pair<Dataset, Dataset>> pairs) {
  using Key = std::pair<std::vector<double>, Label>;
  std::map<Key, std::vector<std::size_t>> rows_by_key;
  for (std::size_t i = 0; i < full.size(); ++i) {
    auto r = full.row(i);
    rows_by_key[{std::vector<double>(r.begin(), r.end()), full.label(i)}].push_back(i);
  }

  // Identical rows are interchangeable; copies not yet tested are handed to a
  // test part first so each copy is tested once.
  std::vector<std::size_t> times_tested(full.size(), 0);
  auto match = [&](const Dataset& part, std::map<Key, std::size_t>& used,
                   const char* what, std::size_t fold) {
    if (part.dims() != full.dims())
      throw Error("partition " + std::to_string(fold) + " " + what + ": dimension mismatch");
    std::vector<std::size_t> out;
    out.reserve(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) {
      auto r = part.row(i);
      Key key{std::vector<double>(r.begin(), r.end()), part.label(i)};
      auto it = rows_by_key.find(key);
      std::size_t& n = used[key];
      if (it == rows_by_key.end() || n >= it->second.size())
        throw Error("partition " + std::to_string(fold) + " " + what + ": row " +
                    std::to_string(i) + " not found in the full dataset");
      if (n == 0 && it->second.size() > 1)
        std::stable_sort(it->second.begin(), it->second.end(), [&](std::size_t a, std::size_t b) {
          return times_tested[a] < times_tested[b];
        });
      out.push_back(it->second[n++]);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<FoldSplit> folds;
  for (std::size_t f = 0; f < pairs.size(); ++f) {
    std::map<Key, std::size_t> used;
    FoldSplit split;
    split.fold_id = f + 1;
    split.test_indices = match(pairs[f].second, used, "test", f + 1);
    split.train_indices = match(pairs[f].first, used, "train", f + 1);
    if (split.train_indices.size() + split.test_indices.size() != full.size())
      throw Error("partition " + std::to_string(f + 1) + " does not cover the full dataset");
    const auto train_pos = std::count_if(split.train_indices.begin(), split.train_indices.end(),
                                         [&](std::size_t i) { return full.label(i) == Label::positive; });
    if (train_pos == 0 || static_cast<std::size_t>(train_pos) == split.train_indices.size())
      throw Error("partition " + std::to_string(f + 1) + ": training part lacks a class");
    for (std::size_t i : split.test_indices) ++times_tested[i];
    folds.push_back(std::move(split));
  }
  for (std::size_t i = 0; i < full.size(); ++i)
    if (times_tested[i] != 1)
      throw Error("row " + std::to_string(i) + " appears in " + std::to_string(times_tested[i]) +
                  " test partitions");
  return folds;
}

}  // namespace roced
