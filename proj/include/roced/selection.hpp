#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"
#include "roced/hardness.hpp"
#include "roced/neighborhood.hpp"
#include "roced/parallel.hpp"
#include "roced/pool.hpp"

namespace roced {

enum class Technique { knora_e, knora_u, knora_b, knora_bi, proposed };

constexpr const char* to_string(Technique t) noexcept {
  switch (t) {
    case Technique::knora_e: return "KNORA-E";
    case Technique::knora_u: return "KNORA-U";
    case Technique::knora_b: return "KNORA-B";
    case Technique::knora_bi: return "KNORA-BI";
    case Technique::proposed: return "PROPOSED";
  }
  return "?";
}

inline Technique parse_technique(std::string_view s) {
  for (Technique t : {Technique::knora_e, Technique::knora_u, Technique::knora_b,
                      Technique::knora_bi, Technique::proposed})
    if (s == to_string(t)) return t;
  // accept the enum spelling too
  if (s == "KNORA_E") return Technique::knora_e;
  if (s == "KNORA_U") return Technique::knora_u;
  if (s == "KNORA_B") return Technique::knora_b;
  if (s == "KNORA_BI") return Technique::knora_bi;
  throw Error("unknown technique '" + std::string(s) + "'");
}

struct SelectorConfig {
  Technique technique = Technique::knora_e;
  std::size_t roc_size = 7;
  std::optional<Measure> measure;  // PROPOSED only

  void validate() const {
    if (roc_size == 0) throw Error("selector: RoC size must be >= 1");
    if (technique == Technique::proposed && !measure)
      throw Error("selector: PROPOSED needs a hardness measure");
    if (technique != Technique::proposed && measure)
      throw Error(std::string("selector: ") + to_string(technique) + " takes no hardness measure");
  }

  // e.g. "KNORA-E", "PROPOSED-LSCi"
  std::string label() const {
    std::string s = to_string(technique);
    if (measure) s += std::string("-") + to_string(*measure);
    return s;
  }
};

struct SelectionResult {
  std::vector<std::size_t> selected;      // pool member indices, ascending
  std::vector<std::size_t> votes;         // per selected member; empty = one vote each
  std::vector<std::size_t> removal_trace; // DSEL indices in removal order
  bool fallback_used = false;
};

// Correctness of every pool member on every DSEL sample, computed once per
// (pool, DSEL) pair.
class OracleTable {
 public:
  OracleTable(const TrainedPool& pool, const Dataset& dsel, std::size_t threads = 1)
      : pool_(&pool), dsel_(&dsel), correct_(pool.size() * dsel.size(), 0) {
    if (!pool.members.empty() && pool[0].weights.size() != dsel.dims())
      throw Error("oracle table: pool and DSEL dimensions differ");
    parallel_for(pool.size(), threads, [&](std::size_t j) {
      for (std::size_t i = 0; i < dsel.size(); ++i)
        correct_[j * dsel.size() + i] = pool[j].predict(dsel.row(i)) == dsel.label(i);
    });
  }

  const TrainedPool& pool() const noexcept { return *pool_; }
  const Dataset& dsel() const noexcept { return *dsel_; }
  std::size_t members() const noexcept { return pool_->size(); }
  bool correct(std::size_t member, std::size_t sample) const noexcept {
    return correct_[member * dsel_->size() + sample] != 0;
  }
  std::size_t hits(std::size_t member, const RegionOfCompetence& roc) const noexcept {
    std::size_t n = 0;
    for (const auto& nb : roc.members()) n += correct(member, nb.index);
    return n;
  }

 private:
  const TrainedPool* pool_;
  const Dataset* dsel_;
  std::vector<unsigned char> correct_;
};

// Members correct on every sample of the region. An empty region makes every
// member a local oracle.
inline std::vector<std::size_t> local_oracles(const OracleTable& table,
                                              const RegionOfCompetence& roc) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < table.members(); ++j)
    if (table.hits(j, roc) == roc.size()) out.push_back(j);
  return out;
}

inline std::vector<std::size_t> local_oracles(const TrainedPool& pool, const Dataset& dsel,
                                              const RegionOfCompetence& roc) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    const bool all = std::all_of(roc.members().begin(), roc.members().end(), [&](const Neighbor& n) {
      return pool[j].predict(dsel.row(n.index)) == dsel.label(n.index);
    });
    if (all) out.push_back(j);
  }
  return out;
}

namespace detail {

// Shared elimination loop. `pick` returns the DSEL index to drop next, or
// nullopt when no removal is allowed.
template <typename Pick>
SelectionResult eliminate(const OracleTable& table, RegionOfCompetence roc, Pick&& pick) {
  SelectionResult r;
  r.selected = local_oracles(table, roc);
  while (r.selected.empty()) {
    const std::optional<std::size_t> victim = pick(roc);
    if (!victim) break;
    roc.remove_member(*victim);
    r.removal_trace.push_back(*victim);
    r.selected = local_oracles(table, roc);
  }
  if (r.selected.empty() || roc.empty()) {
    r.fallback_used = true;
    r.selected.resize(table.members());
    for (std::size_t j = 0; j < r.selected.size(); ++j) r.selected[j] = j;
  }
  return r;
}

inline std::optional<std::size_t> pick_furthest(const RegionOfCompetence& roc) {
  if (roc.empty()) return std::nullopt;
  return roc.furthest().index;
}

// Hardest member; equal scores go to the furthest one, then the larger index.
inline std::optional<std::size_t> pick_hardest(const RegionOfCompetence& roc,
                                               const HardnessProfile& profile) {
  if (roc.empty()) return std::nullopt;
  const auto& m = roc.members();
  std::size_t best = m.size() - 1;
  for (std::size_t pos = m.size() - 1; pos-- > 0;)
    if (profile[m[pos].index] > profile[m[best].index]) best = pos;
  return m[best].index;
}

// Furthest member whose removal keeps every protected class represented.
inline std::optional<std::size_t> pick_furthest_keeping(const RegionOfCompetence& roc,
                                                        const Dataset& dsel, bool protect_negative) {
  std::size_t count[2] = {0, 0};
  for (const auto& n : roc.members()) ++count[static_cast<int>(dsel.label(n.index))];
  const auto& m = roc.members();
  for (std::size_t pos = m.size(); pos-- > 0;) {
    const Label y = dsel.label(m[pos].index);
    const bool is_protected = y == Label::positive || protect_negative;
    if (!is_protected || count[static_cast<int>(y)] > 1) return m[pos].index;
  }
  return std::nullopt;
}

inline void check_profile(const OracleTable& table, const HardnessProfile& profile) {
  if (profile.size() != table.dsel().size())
    throw Error("hardness profile has " + std::to_string(profile.size()) +
                " scores for a DSEL of " + std::to_string(table.dsel().size()));
}

}  // namespace detail

// Editing on an already built region.
inline SelectionResult edit_knora_e(const OracleTable& table, RegionOfCompetence roc) {
  return detail::eliminate(table, std::move(roc), detail::pick_furthest);
}

inline SelectionResult edit_proposed(const OracleTable& table, RegionOfCompetence roc,
                                     const HardnessProfile& profile) {
  detail::check_profile(table, profile);
  return detail::eliminate(table, std::move(roc), [&](const RegionOfCompetence& r) {
    return detail::pick_hardest(r, profile);
  });
}

inline SelectionResult edit_knora_b(const OracleTable& table, RegionOfCompetence roc) {
  return detail::eliminate(table, std::move(roc), [&](const RegionOfCompetence& r) {
    return detail::pick_furthest_keeping(r, table.dsel(), true);
  });
}

inline SelectionResult edit_knora_bi(const OracleTable& table, RegionOfCompetence roc) {
  return detail::eliminate(table, std::move(roc), [&](const RegionOfCompetence& r) {
    return detail::pick_furthest_keeping(r, table.dsel(), false);
  });
}

// One vote per region sample a member labels correctly; zero-vote members are
// dropped unless every member has zero votes.
inline SelectionResult edit_knora_u(const OracleTable& table, const RegionOfCompetence& roc) {
  SelectionResult r;
  for (std::size_t j = 0; j < table.members(); ++j) {
    const std::size_t v = table.hits(j, roc);
    if (v > 0) {
      r.selected.push_back(j);
      r.votes.push_back(v);
    }
  }
  if (r.selected.empty()) {
    r.fallback_used = true;
    r.selected.resize(table.members());
    for (std::size_t j = 0; j < r.selected.size(); ++j) r.selected[j] = j;
    r.votes.assign(table.members(), 1);
  }
  return r;
}

inline SelectionResult select_knora_e(const OracleTable& table, std::span<const double> query,
                                      std::size_t k) {
  return edit_knora_e(table, knn(query, table.dsel(), k));
}

inline SelectionResult select_proposed(const OracleTable& table, std::span<const double> query,
                                       std::size_t k, const HardnessProfile& profile) {
  return edit_proposed(table, knn(query, table.dsel(), k), profile);
}

inline SelectionResult select_knora_b(const OracleTable& table, std::span<const double> query,
                                      std::size_t k) {
  return edit_knora_b(table, knn(query, table.dsel(), k));
}

inline SelectionResult select_knora_bi(const OracleTable& table, std::span<const double> query,
                                       std::size_t k) {
  return edit_knora_bi(table, knn(query, table.dsel(), k));
}

inline SelectionResult select_knora_u(const OracleTable& table, std::span<const double> query,
                                      std::size_t k) {
  return edit_knora_u(table, knn(query, table.dsel(), k));
}

// Complete removal order over every region member, ignoring the oracle stop
// rule: by hardness when a profile is given, else furthest first.
inline std::vector<std::size_t> full_removal_order(RegionOfCompetence roc,
                                                   const HardnessProfile* profile = nullptr) {
  std::vector<std::size_t> order;
  order.reserve(roc.size());
  while (!roc.empty()) {
    const auto victim = profile ? detail::pick_hardest(roc, *profile) : detail::pick_furthest(roc);
    roc.remove_member(*victim);
    order.push_back(*victim);
  }
  return order;
}

struct Prediction {
  Label label = Label::negative;
  double score = 0.0;  // mean P(positive) of the selected members
};

// Majority vote of the selected members (weighted by KNORA-U votes). A tied
// vote goes to the class with the larger summed probability; an exact tie
// after that is negative.
inline Prediction predict(const TrainedPool& pool, const SelectionResult& selection,
                          std::span<const double> query) {
  if (selection.selected.empty()) throw Error("predict: empty selection");
  if (!selection.votes.empty() && selection.votes.size() != selection.selected.size())
    throw Error("predict: vote weights do not match the selection");
  std::size_t vote_pos = 0, vote_neg = 0;
  double proba_pos = 0.0, proba_neg = 0.0;
  for (std::size_t s = 0; s < selection.selected.size(); ++s) {
    const auto& member = pool[selection.selected[s]];
    const std::size_t w = selection.votes.empty() ? 1 : selection.votes[s];
    (member.predict(query) == Label::positive ? vote_pos : vote_neg) += w;
    const double p = predict_proba(member, query);
    proba_pos += p;
    proba_neg += 1.0 - p;
  }
  Prediction out;
  out.score = proba_pos / static_cast<double>(selection.selected.size());
  if (vote_pos != vote_neg)
    out.label = vote_pos > vote_neg ? Label::positive : Label::negative;
  else
    out.label = proba_pos > proba_neg ? Label::positive : Label::negative;
  return out;
}

// Binds a configured technique to a pool, its DSEL and (for PROPOSED) a
// hardness profile. Stateless per query; safe to share across threads.
class DynamicSelector {
 public:
  DynamicSelector(const OracleTable& table, SelectorConfig config,
                  const HardnessProfile* profile = nullptr)
      : table_(&table), config_(config), profile_(profile) {
    config_.validate();
    if (config_.technique == Technique::proposed) {
      if (!profile_) throw Error("selector: PROPOSED needs a hardness profile");
      detail::check_profile(table, *profile_);
    }
    if (config_.roc_size > table.dsel().size())
      throw Error("selector: RoC size exceeds the DSEL size");
  }

  const SelectorConfig& config() const noexcept { return config_; }

  RegionOfCompetence region(std::span<const double> query) const {
    return knn(query, table_->dsel(), config_.roc_size);
  }

  SelectionResult select(std::span<const double> query) const { return edit(region(query)); }

  SelectionResult edit(RegionOfCompetence roc) const {
    switch (config_.technique) {
      case Technique::knora_e: return edit_knora_e(*table_, std::move(roc));
      case Technique::knora_u: return edit_knora_u(*table_, roc);
      case Technique::knora_b: return edit_knora_b(*table_, std::move(roc));
      case Technique::knora_bi: return edit_knora_bi(*table_, std::move(roc));
      case Technique::proposed: return edit_proposed(*table_, std::move(roc), *profile_);
    }
    throw Error("unknown technique");
  }

  Prediction predict(std::span<const double> query) const {
    return roced::predict(table_->pool(), select(query), query);
  }

 private:
  const OracleTable* table_;
  SelectorConfig config_;
  const HardnessProfile* profile_;
};

}  // namespace roced
