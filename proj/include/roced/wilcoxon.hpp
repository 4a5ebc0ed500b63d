#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "roced/error.hpp"

namespace roced {

enum class Verdict { superior, inferior, indistinguishable };

constexpr const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::superior: return "superior";
    case Verdict::inferior: return "inferior";
    case Verdict::indistinguishable: return "indistinguishable";
  }
  return "?";
}

struct WilcoxonResult {
  double p_value = 1.0;
  Verdict verdict = Verdict::indistinguishable;
  double w_plus = 0.0;   // rank sum of positive differences a - b
  double w_minus = 0.0;
  std::size_t n = 0;     // non-zero differences used
  bool exact = false;
};

inline constexpr std::size_t kWilcoxonMinPairs = 5;
inline constexpr std::size_t kWilcoxonExactLimit = 25;

// Two-sided Wilcoxon signed-rank test of paired samples. Zero differences are
// discarded; tied |differences| share their average rank. Up to 25 pairs the
// null distribution is enumerated exactly (ranks doubled to stay integral),
// beyond that a tie- and continuity-corrected normal approximation is used.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                           double alpha = 0.05) {
  if (a.size() != b.size()) throw Error("wilcoxon: samples are not paired");
  std::vector<double> diff;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] - b[i] != 0.0) diff.push_back(a[i] - b[i]);
  const std::size_t n = diff.size();
  if (n < kWilcoxonMinPairs)
    throw Error("wilcoxon: need at least " + std::to_string(kWilcoxonMinPairs) +
                " non-zero differences, got " + std::to_string(n));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(diff[x]) < std::abs(diff[y]); });
  // doubled ranks: 2 * average rank is always an integer
  std::vector<std::uint32_t> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(diff[order[j + 1]]) == std::abs(diff[order[i]])) ++j;
    const auto r2 = static_cast<std::uint32_t>(i + j + 2);
    for (std::size_t t = i; t <= j; ++t) rank2[order[t]] = r2;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }

  WilcoxonResult r;
  r.n = n;
  std::uint64_t w2_plus = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (diff[i] > 0.0) w2_plus += rank2[i];
  const std::uint64_t total2 = std::uint64_t{n} * (n + 1);
  r.w_plus = static_cast<double>(w2_plus) / 2.0;
  r.w_minus = static_cast<double>(total2 - w2_plus) / 2.0;

  if (n <= kWilcoxonExactLimit) {
    // count[s] = number of sign assignments with doubled positive rank sum s
    std::vector<double> count(total2 + 1, 0.0);
    count[0] = 1.0;
    std::uint64_t reach = 0;
    for (std::uint32_t r2 : rank2) {
      for (std::uint64_t s = reach + 1; s-- > 0;)
        if (count[s] != 0.0) count[s + r2] += count[s];
      reach += r2;
    }
    double lower = 0.0, upper = 0.0;
    for (std::uint64_t s = 0; s <= total2; ++s) {
      if (s <= w2_plus) lower += count[s];
      if (s >= w2_plus) upper += count[s];
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    r.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    r.exact = true;
  } else {
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = std::max(0.0, std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var);
    r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }

  if (r.p_value < alpha && r.w_plus != r.w_minus)
    r.verdict = r.w_plus > r.w_minus ? Verdict::superior : Verdict::inferior;
  return r;
}

}  // namespace roced
