#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "roced/config.hpp"
#include "roced/dataset.hpp"
#include "roced/enn.hpp"
#include "roced/evaluation.hpp"
#include "roced/folds.hpp"
#include "roced/hardness.hpp"
#include "roced/keel.hpp"
#include "roced/meta.hpp"
#include "roced/parallel.hpp"
#include "roced/pool.hpp"
#include "roced/rng.hpp"
#include "roced/selection.hpp"

namespace roced {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One (dataset, fold, seed, technique) cell.
struct FoldRecord {
  std::string dataset;
  std::size_t fold = 0;
  std::uint64_t seed = 0;
  std::string technique;
  ConfusionCounts confusion;
  double f1 = kNaN;
  double gmean = kNaN;  // NaN when the test fold lacks a class
  double fallback_rate = 0.0;
  double mean_selected = 0.0;
  double divergence = kNaN;  // PROPOSED only
  std::size_t queries = 0;
  std::size_t divergent = 0;
  std::size_t dsel_size = 0;
  std::size_t enn_removed = 0;
  std::uint64_t pool_fingerprint = 0;
};

struct CellFailure {
  std::string dataset;
  std::size_t fold = 0;
  std::uint64_t seed = 0;
  std::string reason;
};

struct FoldOutput {
  std::vector<FoldRecord> records;
  std::vector<std::string> trace_lines;  // JSON lines, when tracing
};

// Per-cell master seed from a stable hash; no RNG state crosses cells.
inline std::uint64_t cell_seed(const std::string& dataset, std::size_t fold, std::uint64_t seed) {
  return derive_seed(derive_seed(hash_string(dataset), seed), fold);
}

inline std::uint64_t split_seed(const std::string& dataset, std::uint64_t seed) {
  return derive_seed(hash_string(dataset), ~seed);
}

// Pool on the training split; DSEL is the training split (ENN-edited when
// enabled, the pool is not); hardness on the DSEL; select and predict every
// test query for every configured technique.
inline FoldOutput run_fold(const ExperimentConfig& cfg, const Dataset& data, const FoldSplit& fold,
                           std::uint64_t seed, bool trace = false) {
  Dataset train = data.subset(fold.train_indices);
  Dataset test = data.subset(fold.test_indices);
  if (cfg.standardize) {
    const auto z = ZScore::fit(train);
    train = z.apply(train);
    test = z.apply(test);
  }

  BaggingParams bagging;
  bagging.pool_size = cfg.pool_size;
  bagging.perceptron = {cfg.learning_rate, cfg.epochs};
  const TrainedPool pool = bagging_pool(train, bagging, cell_seed(data.name(), fold.fold_id, seed));

  Dataset dsel = train;
  std::size_t enn_removed = 0;
  if (cfg.enn_enabled) {
    const auto edit = enn_edit(train, cfg.enn_k);
    enn_removed = edit.removed_count;
    dsel = train.subset(edit.kept_indices);
  }

  std::map<Measure, HardnessProfile> profiles;
  for (const auto& t : cfg.techniques)
    if (t.measure && !profiles.count(*t.measure))
      profiles.emplace(*t.measure, estimate_all(dsel, *t.measure, cfg.hardness()));

  const OracleTable table(pool, dsel);
  FoldOutput out;
  for (const auto& tcfg : cfg.techniques) {
    const HardnessProfile* profile = tcfg.measure ? &profiles.at(*tcfg.measure) : nullptr;
    const DynamicSelector selector(table, tcfg, profile);

    FoldRecord rec;
    rec.dataset = data.name();
    rec.fold = fold.fold_id;
    rec.seed = seed;
    rec.technique = tcfg.label();
    rec.dsel_size = dsel.size();
    rec.enn_removed = enn_removed;
    rec.pool_fingerprint = pool.train_fingerprint;
    rec.queries = test.size();

    std::size_t fallbacks = 0, selected_total = 0;
    for (std::size_t q = 0; q < test.size(); ++q) {
      const auto x = test.row(q);
      const auto roc = selector.region(x);
      const auto sel = selector.edit(roc);
      const auto pred = roced::predict(pool, sel, x);
      rec.confusion.add(test.label(q), pred.label);
      fallbacks += sel.fallback_used;
      selected_total += sel.selected.size();

      std::vector<std::size_t> full_order, baseline_order;
      if (profile) {
        full_order = full_removal_order(roc, profile);
        baseline_order = full_removal_order(roc);
        rec.divergent += full_order != baseline_order;
      }
      if (trace) {
        nlohmann::json line = {{"dataset", data.name()},
                               {"fold", fold.fold_id},
                               {"seed", seed},
                               {"query", fold.test_indices[q]},
                               {"technique", rec.technique},
                               {"removal_trace", sel.removal_trace},
                               {"selected_size", sel.selected.size()},
                               {"fallback", sel.fallback_used}};
        if (profile) {
          line["full_order"] = full_order;
          line["baseline_order"] = baseline_order;
        }
        out.trace_lines.push_back(line.dump());
      }
    }
    const double nq = static_cast<double>(test.size());
    rec.f1 = f1(rec.confusion);
    if (rec.confusion.positives() > 0 && rec.confusion.negatives() > 0) rec.gmean = gmean(rec.confusion);
    rec.fallback_rate = test.size() ? static_cast<double>(fallbacks) / nq : 0.0;
    rec.mean_selected = test.size() ? static_cast<double>(selected_total) / nq : 0.0;
    if (profile) rec.divergence = test.size() ? static_cast<double>(rec.divergent) / nq : 0.0;
    out.records.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<FoldSplit> make_folds(const ExperimentConfig& cfg, const Dataset& data,
                                         std::uint64_t seed) {
  if (cfg.use_official_partitions) {
    const auto pairs = load_keel_partition_files(cfg.dataset_dir, data, cfg.folds);
    return load_keel_partitions(data, pairs);
  }
  return stratified_folds(data, cfg.folds, split_seed(data.name(), seed));
}

struct DatasetSummary {
  DatasetMeta meta;
  bool complete = false;  // every cell ran
};

struct ExperimentReport {
  std::vector<DatasetSummary> datasets;
  std::vector<std::string> techniques;
  std::vector<FoldRecord> records;
  std::vector<CellFailure> failures;
  std::vector<std::pair<std::string, std::string>> load_errors;
  std::vector<std::string> trace_lines;

  // Mean over folds and seeds per completed dataset, restricted to `group`
  // ("all", "safe" or "unsafe").
  std::vector<TechniqueScores> scores(const std::string& group) const {
    std::vector<TechniqueScores> out;
    for (const auto& t : techniques) out.push_back({t, {}, {}, {}});
    for (const auto& ds : datasets) {
      if (!ds.complete) continue;
      const bool safe = ds.meta.safe_pct >= kSafeThreshold;
      if ((group == "safe" && !safe) || (group == "unsafe" && safe)) continue;
      for (std::size_t t = 0; t < techniques.size(); ++t) {
        double f = 0.0, g = 0.0;
        std::size_t nf = 0, ng = 0;
        for (const auto& r : records) {
          if (r.dataset != ds.meta.name || r.technique != techniques[t]) continue;
          f += r.f1;
          ++nf;
          if (!std::isnan(r.gmean)) {
            g += r.gmean;
            ++ng;
          }
        }
        out[t].datasets.push_back(ds.meta.name);
        out[t].f1.push_back(nf ? f / static_cast<double>(nf) : kNaN);
        out[t].gmean.push_back(ng ? g / static_cast<double>(ng) : kNaN);
      }
    }
    return out;
  }
};

// Runs every (dataset, fold, seed) cell. Cells are independent and may run
// concurrently; results are stored by cell position, so the report does not
// depend on scheduling.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  for (const auto& t : cfg.techniques) report.techniques.push_back(t.label());

  std::vector<Dataset> data;
  for (const auto& name : cfg.dataset_names) {
    try {
      auto d = load_keel_file(keel_dataset_path(cfg.dataset_dir, name));
      DatasetSummary s;
      s.meta = compute_meta(d);
      report.datasets.push_back(s);
      data.push_back(std::move(d));
    } catch (const std::exception& e) {
      report.load_errors.emplace_back(name, e.what());
    }
  }

  struct Cell {
    std::size_t dataset;
    std::uint64_t seed;
    FoldSplit fold;
  };
  std::vector<Cell> cells;
  std::vector<std::string> split_errors(data.size());
  for (std::size_t d = 0; d < data.size(); ++d) {
    for (auto seed : cfg.seeds) {
      try {
        for (auto& f : make_folds(cfg, data[d], seed)) cells.push_back({d, seed, std::move(f)});
      } catch (const std::exception& e) {
        split_errors[d] = e.what();
      }
    }
  }

  std::vector<FoldOutput> outputs(cells.size());
  std::vector<std::optional<std::string>> errors(cells.size());
  parallel_for(cells.size(), cfg.threads, [&](std::size_t c) {
    try {
      outputs[c] = run_fold(cfg, data[cells[c].dataset], cells[c].fold, cells[c].seed, cfg.trace_log);
    } catch (const std::exception& e) {
      errors[c] = e.what();
    }
  });

  std::vector<bool> failed(data.size(), false);
  for (std::size_t d = 0; d < data.size(); ++d) {
    if (!split_errors[d].empty()) {
      failed[d] = true;
      report.failures.push_back({data[d].name(), 0, 0, split_errors[d]});
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (errors[c]) {
      failed[cells[c].dataset] = true;
      report.failures.push_back(
          {data[cells[c].dataset].name(), cells[c].fold.fold_id, cells[c].seed, *errors[c]});
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (failed[cells[c].dataset]) continue;
    for (auto& r : outputs[c].records) report.records.push_back(std::move(r));
    for (auto& l : outputs[c].trace_lines) report.trace_lines.push_back(std::move(l));
  }
  for (std::size_t d = 0; d < data.size(); ++d) report.datasets[d].complete = !failed[d];
  return report;
}

}  // namespace roced
