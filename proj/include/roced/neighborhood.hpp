#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"

namespace roced {

// Euclidean distance, accumulated in feature order.
inline double euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Strict weak order used everywhere: closer first, then smaller row index.
constexpr bool closer(const Neighbor& a, const Neighbor& b) noexcept {
  return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

// Distances from `query` to every row of `data`.
inline std::vector<double> distances_to(std::span<const double> query, const Dataset& data) {
  if (query.size() != data.dims()) throw Error("query dimension does not match dataset");
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = euclidean(query, data.row(i));
  return out;
}

// The neighbours of a query ordered by (distance, index). Editing only ever
// removes members.
class RegionOfCompetence {
 public:
  RegionOfCompetence() = default;
  RegionOfCompetence(std::vector<double> query, std::vector<Neighbor> members)
      : query_(std::move(query)), members_(std::move(members)) {
    if (!std::is_sorted(members_.begin(), members_.end(), closer))
      throw Error("region members must be sorted by (distance, index)");
    for (std::size_t i = 1; i < members_.size(); ++i)
      if (members_[i].index == members_[i - 1].index) throw Error("duplicate region member");
  }

  std::span<const double> query() const noexcept { return query_; }
  const std::vector<Neighbor>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const Neighbor& nearest() const { return members_.front(); }
  const Neighbor& furthest() const { return members_.back(); }

  bool contains(std::size_t dsel_index) const noexcept {
    return std::any_of(members_.begin(), members_.end(),
                       [&](const Neighbor& n) { return n.index == dsel_index; });
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(members_.size());
    for (const auto& n : members_) out.push_back(n.index);
    return out;
  }

  void remove_member(std::size_t dsel_index) {
    auto it = std::find_if(members_.begin(), members_.end(),
                           [&](const Neighbor& n) { return n.index == dsel_index; });
    if (it == members_.end())
      throw Error("index " + std::to_string(dsel_index) + " is not in the region");
    members_.erase(it);
  }

  // Drops the member with the largest distance (larger index on ties) and
  // returns its DSEL index.
  std::size_t remove_furthest() {
    if (members_.empty()) throw Error("remove_furthest on an empty region");
    const std::size_t idx = members_.back().index;
    members_.pop_back();
    return idx;
  }

 private:
  std::vector<double> query_;
  std::vector<Neighbor> members_;
};

// Exact k-nearest neighbours by brute-force scan. `exclude` drops one DSEL row
// (leave-one-out queries).
inline RegionOfCompetence knn(std::span<const double> query, const Dataset& dsel, std::size_t k,
                              std::optional<std::size_t> exclude = std::nullopt) {
  if (query.size() != dsel.dims()) throw Error("knn: query dimension does not match DSEL");
  const std::size_t available = dsel.size() - (exclude && *exclude < dsel.size() ? 1 : 0);
  if (k == 0 || k > available)
    throw Error("knn: k=" + std::to_string(k) + " out of range for " + std::to_string(available) +
                " candidates");
  std::vector<Neighbor> all;
  all.reserve(available);
  for (std::size_t i = 0; i < dsel.size(); ++i) {
    if (exclude && *exclude == i) continue;
    all.push_back({i, euclidean(query, dsel.row(i))});
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
  all.resize(k);
  return RegionOfCompetence(std::vector<double>(query.begin(), query.end()), std::move(all));
}

// Leave-one-out neighbourhood of a DSEL row.
inline RegionOfCompetence knn_of_row(const Dataset& dsel, std::size_t row, std::size_t k) {
  return knn(dsel.row(row), dsel, k, row);
}

}  // namespace roced
