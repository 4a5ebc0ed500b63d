#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"
#include "roced/neighborhood.hpp"

namespace roced {

struct DatasetMeta {
  std::string name;
  std::size_t instances = 0;
  std::size_t features = 0;
  double imbalance_ratio = 1.0;  // negatives / positives
  double safe_pct = 0.0;         // share of safe positives, in [0, 100]
};

enum class Scaling { none, zscore };

// Characterizes a dataset: size, imbalance ratio and the percentage of safe
// minority samples. A positive sample is safe when at least k_type - 1 of its
// k_type nearest neighbours (self excluded) are positive.
//
// Typing distances are computed on z-scored features by default; the
// heterogeneous (HVDM) distance normally used for this typing reduces to a
// per-feature standard-deviation scaling on all-numeric data.
inline DatasetMeta compute_meta(const Dataset& d, std::size_t k_type = 5,
                                Scaling scaling = Scaling::zscore) {
  if (d.size() <= k_type)
    throw Error("compute_meta: need more than " + std::to_string(k_type) + " rows");
  if (d.positives() == 0) throw Error("compute_meta: no positive samples");
  const Dataset scaled = scaling == Scaling::zscore ? ZScore::fit(d).apply(d) : d;

  std::size_t safe = 0;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    if (scaled.label(i) != Label::positive) continue;
    const auto roc = knn_of_row(scaled, i, k_type);
    std::size_t same = 0;
    for (const auto& n : roc.members())
      if (scaled.label(n.index) == Label::positive) ++same;
    if (same + 1 >= k_type) ++safe;
  }

  DatasetMeta m;
  m.name = d.name();
  m.instances = d.size();
  m.features = d.dims();
  m.imbalance_ratio = static_cast<double>(d.negatives()) / static_cast<double>(d.positives());
  m.safe_pct = 100.0 * static_cast<double>(safe) / static_cast<double>(d.positives());
  return m;
}

}  // namespace roced
