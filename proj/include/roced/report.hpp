#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "roced/error.hpp"
#include "roced/evaluation.hpp"
#include "roced/experiment.hpp"
#include "roced/meta.hpp"
#include "roced/wilcoxon.hpp"

namespace roced {

// Machine precision: round-trips every double. NaN is written as NA.
inline std::string fmt_full(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Human tables: three decimals.
inline std::string fmt3(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline void write_meta_csv(std::ostream& out, std::span<const DatasetMeta> metas) {
  out << "dataset,instances,features,imbalance_ratio,safe_pct,group\n";
  for (const auto& m : metas)
    out << m.name << ',' << m.instances << ',' << m.features << ',' << fmt3(m.imbalance_ratio) << ','
        << fmt3(m.safe_pct) << ',' << (m.safe_pct >= kSafeThreshold ? "safe" : "unsafe") << '\n';
}

inline void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "dataset,fold,seed,technique,tp,fp,tn,fn,f1,gmean,fallback_rate,mean_selected,"
         "divergence,dsel_size,enn_removed,pool_fingerprint\n";
  for (const auto& rec : r.records) {
    out << rec.dataset << ',' << rec.fold << ',' << rec.seed << ',' << rec.technique << ','
        << rec.confusion.tp << ',' << rec.confusion.fp << ',' << rec.confusion.tn << ','
        << rec.confusion.fn << ',' << fmt_full(rec.f1) << ',' << fmt_full(rec.gmean) << ','
        << fmt_full(rec.fallback_rate) << ',' << fmt_full(rec.mean_selected) << ','
        << fmt_full(rec.divergence) << ',' << rec.dsel_size << ',' << rec.enn_removed << ','
        << rec.pool_fingerprint << '\n';
  }
}

struct AggregateRow {
  std::string technique;
  double mean_f1 = kNaN, rank_f1 = kNaN, mean_gmean = kNaN, rank_gmean = kNaN, wins = kNaN;
};

inline std::vector<AggregateRow> aggregate(std::span<const TechniqueScores> scores) {
  std::vector<AggregateRow> rows;
  if (scores.empty() || scores.front().datasets.empty()) {
    for (const auto& s : scores) rows.push_back({s.technique});
    return rows;
  }
  const auto rf = mean_ranks(scores, Metric::f1);
  const auto rg = mean_ranks(scores, Metric::gmean);
  const auto w = wins(scores);
  for (std::size_t t = 0; t < scores.size(); ++t) {
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    rows.push_back({scores[t].technique, mean(scores[t].f1), rf[t], mean(scores[t].gmean), rg[t], w[t]});
  }
  return rows;
}

inline void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows) {
  out << "technique,mean_f1,rank_f1,mean_gmean,rank_gmean,wins\n";
  for (const auto& r : rows)
    out << r.technique << ',' << fmt_full(r.mean_f1) << ',' << fmt_full(r.rank_f1) << ','
        << fmt_full(r.mean_gmean) << ',' << fmt_full(r.rank_gmean) << ',' << fmt_full(r.wins) << '\n';
}

// Row technique vs column technique: '+' row significantly better, '-'
// significantly worse, '~' no significant difference, followed by the
// two-sided p-value. NA when there are too few non-zero differences.
inline void write_wilcoxon_csv(std::ostream& out, std::span<const TechniqueScores> scores,
                               Metric metric, double alpha = 0.05) {
  out << "technique";
  for (const auto& s : scores) out << ',' << s.technique;
  out << '\n';
  for (const auto& a : scores) {
    out << a.technique;
    for (const auto& b : scores) {
      out << ',';
      if (&a == &b) continue;
      try {
        const auto w = wilcoxon_signed_rank(a.values(metric), b.values(metric), alpha);
        const char sign = w.verdict == Verdict::superior ? '+' : w.verdict == Verdict::inferior ? '-' : '~';
        out << sign << fmt_full(w.p_value);
      } catch (const Error&) {
        out << "NA";
      }
    }
    out << '\n';
  }
}

inline std::string group_of(const ExperimentReport& r, const std::string& dataset) {
  for (const auto& d : r.datasets)
    if (d.meta.name == dataset) return d.meta.safe_pct >= kSafeThreshold ? "safe" : "unsafe";
  return "unknown";
}

inline void write_divergence_csv(std::ostream& out, const ExperimentReport& r) {
  out << "dataset,group,fold,seed,technique,queries,divergent,fraction\n";
  for (const auto& rec : r.records) {
    if (std::isnan(rec.divergence)) continue;
    out << rec.dataset << ',' << group_of(r, rec.dataset) << ',' << rec.fold << ',' << rec.seed
        << ',' << rec.technique << ',' << rec.queries << ',' << rec.divergent << ','
        << fmt_full(rec.divergence) << '\n';
  }
}

// dataset,group,safe_pct,technique,metric,value  (per-dataset means)
inline void write_long_csv(std::ostream& out, const ExperimentReport& r) {
  out << "dataset,group,safe_pct,technique,metric,value\n";
  const auto scores = r.scores("all");
  for (const auto& s : scores) {
    for (std::size_t d = 0; d < s.datasets.size(); ++d) {
      double safe_pct = kNaN;
      for (const auto& ds : r.datasets)
        if (ds.meta.name == s.datasets[d]) safe_pct = ds.meta.safe_pct;
      const auto prefix = s.datasets[d] + ',' + group_of(r, s.datasets[d]) + ',' + fmt_full(safe_pct) +
                          ',' + s.technique + ',';
      out << prefix << "F1," << fmt_full(s.f1[d]) << '\n';
      out << prefix << "G-mean," << fmt_full(s.gmean[d]) << '\n';
      double div = 0.0;
      std::size_t n = 0;
      for (const auto& rec : r.records)
        if (rec.dataset == s.datasets[d] && rec.technique == s.technique && !std::isnan(rec.divergence)) {
          div += rec.divergence;
          ++n;
        }
      if (n) out << prefix << "divergence," << fmt_full(div / static_cast<double>(n)) << '\n';
    }
  }
}

inline void write_summary(std::ostream& out, const ExperimentReport& r) {
  for (const char* group : {"all", "safe", "unsafe"}) {
    const auto scores = r.scores(group);
    const std::size_t n = scores.empty() ? 0 : scores.front().datasets.size();
    out << "== " << group << " (" << n << " datasets)\n";
    if (n == 0) continue;
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %8s %8s %8s %8s %8s\n", "technique", "F1", "rankF1",
                  "G-mean", "rankG", "wins");
    out << line;
    for (const auto& row : aggregate(scores)) {
      std::snprintf(line, sizeof line, "%-20s %8s %8s %8s %8s %8s\n", row.technique.c_str(),
                    fmt3(row.mean_f1).c_str(), fmt3(row.rank_f1).c_str(),
                    fmt3(row.mean_gmean).c_str(), fmt3(row.rank_gmean).c_str(),
                    fmt3(row.wins).c_str());
      out << line;
    }
  }
  for (const auto& [name, why] : r.load_errors) out << "load error: " << name << ": " << why << '\n';
  for (const auto& f : r.failures)
    out << "failed: " << f.dataset << " fold " << f.fold << " seed " << f.seed << ": " << f.reason << '\n';
}

inline void write_report_files(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("report.csv");
    write_report_csv(f, r);
  }
  for (const char* group : {"all", "safe", "unsafe"}) {
    const auto scores = r.scores(group);
    {
      auto f = open(std::string("aggregate_") + group + ".csv");
      write_aggregate_csv(f, aggregate(scores));
    }
    for (Metric m : {Metric::f1, Metric::gmean}) {
      auto f = open(std::string("wilcoxon_") + group + "_" + (m == Metric::f1 ? "f1" : "gmean") + ".csv");
      write_wilcoxon_csv(f, scores, m);
    }
  }
  {
    auto f = open("divergence.csv");
    write_divergence_csv(f, r);
  }
  {
    auto f = open("long.csv");
    write_long_csv(f, r);
  }
  {
    auto f = open("summary.txt");
    write_summary(f, r);
  }
  {
    std::vector<DatasetMeta> metas;
    for (const auto& d : r.datasets) metas.push_back(d.meta);
    auto f = open("meta.csv");
    write_meta_csv(f, metas);
  }
  if (!r.trace_lines.empty()) {
    auto f = open("traces.jsonl");
    for (const auto& l : r.trace_lines) f << l << '\n';
  }
}

}  // namespace roced
