#pragma once

#include <cstddef>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"
#include "roced/neighborhood.hpp"
#include "roced/parallel.hpp"

namespace roced {

struct EditResult {
  std::vector<std::size_t> kept_indices;  // ascending, into the original DSEL
  std::size_t removed_count = 0;
};

// Edited Nearest Neighbours restricted to the majority class: a negative
// sample is removed when a majority of its k nearest neighbours (self
// excluded, computed on the unedited set) are positive. All marks are applied
// at once.
inline EditResult enn_edit(const Dataset& dsel, std::size_t k = 3, std::size_t threads = 1) {
  if (dsel.size() <= k) throw Error("enn: need more than k rows");
  if (!dsel.has_both_classes()) throw Error("enn: DSEL must contain both classes");
  const std::size_t majority = k / 2 + 1;
  std::vector<unsigned char> remove(dsel.size(), 0);
  parallel_for(dsel.size(), threads, [&](std::size_t i) {
    if (dsel.label(i) != Label::negative) return;
    std::size_t enemies = 0;
    const auto roc = knn_of_row(dsel, i, k);
    for (const auto& n : roc.members())
      if (dsel.label(n.index) == Label::positive) ++enemies;
    remove[i] = enemies >= majority;
  });

  EditResult r;
  for (std::size_t i = 0; i < dsel.size(); ++i) {
    if (remove[i])
      ++r.removed_count;
    else
      r.kept_indices.push_back(i);
  }
  if (r.removed_count == dsel.negatives())
    throw Error("enn: editing would remove every negative sample");
  return r;
}

}  // namespace roced
