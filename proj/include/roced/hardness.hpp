#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"
#include "roced/neighborhood.hpp"
#include "roced/parallel.hpp"

namespace roced {

enum class Measure { kdn, kdni, lsc, lsci };

constexpr const char* to_string(Measure m) noexcept {
  switch (m) {
    case Measure::kdn: return "KDN";
    case Measure::kdni: return "KDNi";
    case Measure::lsc: return "LSC";
    case Measure::lsci: return "LSCi";
  }
  return "?";
}

inline Measure parse_measure(std::string_view s) {
  for (Measure m : {Measure::kdn, Measure::kdni, Measure::lsc, Measure::lsci})
    if (s == to_string(m)) return m;
  throw Error("unknown hardness measure '" + std::string(s) + "'");
}

inline constexpr Measure all_measures[] = {Measure::kdn, Measure::kdni, Measure::lsc, Measure::lsci};

struct HardnessParams {
  std::size_t kdn_k = 5;
  double epsilon = 1e-3;
};

// Hardness estimate of every DSEL sample, aligned to DSEL row indices.
// Scores lie in [0, 1]; higher is harder.
struct HardnessProfile {
  Measure measure = Measure::kdn;
  HardnessParams params;
  std::vector<double> scores;

  std::size_t size() const noexcept { return scores.size(); }
  double operator[](std::size_t i) const noexcept { return scores[i]; }

  // A profile with every score equal; editing then falls back to distance order.
  static HardnessProfile constant(std::size_t n, double value = 0.5) {
    HardnessProfile p;
    p.scores.assign(n, value);
    return p;
  }
};

// Maps [0, inf) onto [0, 1).
constexpr double bound_score(double x) noexcept { return 1.0 - 1.0 / (1.0 + x); }

// Fraction of the k nearest neighbours (self excluded) with a different label.
inline double kdn(std::size_t i, const Dataset& dsel, std::size_t k = 5) {
  if (dsel.size() <= k)
    throw Error("kdn: DSEL of size " + std::to_string(dsel.size()) + " needs more than k=" +
                std::to_string(k) + " rows");
  const auto roc = knn_of_row(dsel, i, k);
  std::size_t disagree = 0;
  for (const auto& n : roc.members())
    if (dsel.label(n.index) != dsel.label(i)) ++disagree;
  return static_cast<double>(disagree) / static_cast<double>(k);
}

// KDN offset by epsilon, divided by the share of the opposite class, bounded.
inline double kdni(std::size_t i, const Dataset& dsel, std::size_t k = 5, double epsilon = 1e-3) {
  const std::size_t opposite_count = dsel.count(opposite(dsel.label(i)));
  if (opposite_count == 0) throw Error("kdni: DSEL has a single class");
  const double p_o = static_cast<double>(opposite_count) / static_cast<double>(dsel.size());
  return bound_score((kdn(i, dsel, k) + epsilon) / p_o);
}

// Size of the local set of row i: rows j != i strictly closer to i than i's
// nearest enemy.
inline std::size_t local_set_size(std::size_t i, const Dataset& dsel) {
  const auto d = distances_to(dsel.row(i), dsel);
  double nearest_enemy = std::numeric_limits<double>::infinity();
  bool has_enemy = false;
  for (std::size_t j = 0; j < dsel.size(); ++j) {
    if (dsel.label(j) != dsel.label(i)) {
      has_enemy = true;
      if (d[j] < nearest_enemy) nearest_enemy = d[j];
    }
  }
  if (!has_enemy) throw Error("local set: sample " + std::to_string(i) + " has no enemy");
  std::size_t n = 0;
  for (std::size_t j = 0; j < dsel.size(); ++j)
    if (j != i && d[j] < nearest_enemy) ++n;
  return n;
}

inline double lsc(std::size_t i, const Dataset& dsel) {
  return 1.0 - static_cast<double>(local_set_size(i, dsel)) / static_cast<double>(dsel.size());
}

// Same-class count in the denominator includes i itself.
inline double lsci(std::size_t i, const Dataset& dsel) {
  return 1.0 - static_cast<double>(local_set_size(i, dsel)) /
                   static_cast<double>(dsel.count(dsel.label(i)));
}

inline double hardness_of(std::size_t i, const Dataset& dsel, Measure m, const HardnessParams& p) {
  switch (m) {
    case Measure::kdn: return kdn(i, dsel, p.kdn_k);
    case Measure::kdni: return kdni(i, dsel, p.kdn_k, p.epsilon);
    case Measure::lsc: return lsc(i, dsel);
    case Measure::lsci: return lsci(i, dsel);
  }
  throw Error("unknown measure");
}

// Memorization step: hardness of every DSEL sample.
inline HardnessProfile estimate_all(const Dataset& dsel, Measure measure,
                                    const HardnessParams& params = {}, std::size_t threads = 1) {
  if (measure == Measure::kdni || measure == Measure::lsc || measure == Measure::lsci) {
    if (!dsel.has_both_classes())
      throw Error(std::string(to_string(measure)) + " needs both classes in the DSEL");
  }
  HardnessProfile p;
  p.measure = measure;
  p.params = params;
  p.scores.resize(dsel.size());
  parallel_for(dsel.size(), threads,
               [&](std::size_t i) { p.scores[i] = hardness_of(i, dsel, measure, params); });
  return p;
}

// index,label,score
inline void write_profile_csv(std::ostream& out, const HardnessProfile& p, const Dataset& dsel) {
  if (p.size() != dsel.size()) throw Error("profile is not aligned to the DSEL");
  const auto old = out.precision(17);
  out << "index,label," << to_string(p.measure) << '\n';
  for (std::size_t i = 0; i < p.size(); ++i)
    out << i << ',' << to_string(dsel.label(i)) << ',' << p.scores[i] << '\n';
  out.precision(old);
}

}  // namespace roced
