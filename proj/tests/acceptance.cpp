// Acceptance checks. Each test prints one "criterion N ...: PASS|FAIL" line.
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "roced/roced.hpp"

using namespace roced;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void verdict(int n, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %d %s: %s (%s)\n", n, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  EXPECT_TRUE(ok) << detail;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Dataset keel(const std::string& name) { return load_keel_file(keel_dataset_path(ROCED_DATA_DIR, name)); }

// Small datasets of mixed safety; every one keeps both classes in each
// training split.
const std::vector<std::string> kSmoke = {"ecoli-0_vs_1", "iris0", "glass1",
                                         "shuttle-c2-vs-c4", "haberman", "glass2"};

std::vector<SelectorConfig> all_techniques(std::size_t k = 7) {
  std::vector<SelectorConfig> t = {{Technique::knora_e, k, std::nullopt},
                                   {Technique::knora_u, k, std::nullopt},
                                   {Technique::knora_b, k, std::nullopt},
                                   {Technique::knora_bi, k, std::nullopt}};
  for (Measure m : all_measures) t.push_back({Technique::proposed, k, m});
  return t;
}

std::vector<SelectorConfig> proposed_only(std::size_t k = 7) {
  std::vector<SelectorConfig> t;
  for (Measure m : all_measures) t.push_back({Technique::proposed, k, m});
  return t;
}

ExperimentConfig base_config(std::vector<std::string> names, std::vector<SelectorConfig> techniques) {
  ExperimentConfig c;
  c.dataset_dir = ROCED_DATA_DIR;
  c.dataset_names = std::move(names);
  c.techniques = std::move(techniques);
  c.threads = 0;
  return c;
}

struct CatalogRow {
  std::size_t instances, features;
  double ir, safe;
};

std::map<std::string, CatalogRow> table_one() {
  std::ifstream in(fs::path(ROCED_DATA_DIR).parent_path() / "keel_catalog.csv");
  std::map<std::string, CatalogRow> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string name, f[4];
    std::getline(ss, name, ',');
    for (auto& x : f) std::getline(ss, x, ',');
    out[name] = {std::stoul(f[0]), std::stoul(f[1]), std::stod(f[2]), std::stod(f[3])};
  }
  return out;
}

std::vector<std::string> by_table_safety(bool safe) {
  std::vector<std::string> out;
  for (const auto& [name, row] : table_one())
    if (safe ? row.safe >= 70.0 : row.safe <= 30.0) out.push_back(name);
  return out;
}

}  // namespace

TEST(Acceptance, Criterion1_HardnessOracle) {
  const auto t0 = Clock::now();
  std::size_t mismatches = 0, samples = 0;
  std::mt19937_64 pick(2024);
  for (std::uint64_t s = 0; s < 50; ++s) {
    fixtures::BlobSpec spec;
    spec.n = 40 + pick() % 261;
    spec.features = 1 + pick() % 5;
    spec.positive_share = 0.1 + 0.4 * static_cast<double>(pick() % 100) / 100.0;
    spec.separation = 0.5 + static_cast<double>(pick() % 30) / 10.0;
    spec.grid = s % 3 == 0 ? 0.5 : 0.0;
    const auto d = fixtures::blobs(spec, 1000 + s);
    const auto o = oracle::hardness(d);
    const std::vector<double>* want[] = {&o.kdn, &o.kdni, &o.lsc, &o.lsci};
    for (std::size_t m = 0; m < 4; ++m) {
      const auto got = estimate_all(d, all_measures[m]);
      for (std::size_t i = 0; i < d.size(); ++i) mismatches += got[i] != (*want[m])[i];
      samples += d.size();
    }
  }
  const double secs = seconds_since(t0);
  verdict(1, "hardness oracle", mismatches == 0 && secs < 60.0,
          std::to_string(mismatches) + " mismatches over " + std::to_string(samples) + " scores, " +
              fmt("%.1f s", secs));
}

TEST(Acceptance, Criterion2_ReductionProperty) {
  std::size_t queries = 0, mismatches = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto d = fixtures::blobs({150, 2 + s % 3, 0.25, 1.0, s % 2 ? 0.5 : 0.0}, 70 + s);
    const auto pool = bagging_pool(d, 30, s);
    const OracleTable table(pool, d);
    const auto flat = HardnessProfile::constant(d.size(), 0.25 * static_cast<double>(s));
    const DynamicSelector e(table, {Technique::knora_e, 7, std::nullopt});
    const DynamicSelector p(table, {Technique::proposed, 7, Measure::kdn}, &flat);
    std::mt19937_64 rng(s);
    for (int q = 0; q < 200; ++q, ++queries) {
      const auto x = fixtures::random_query(d.dims(), rng, s % 2 ? 0.5 : 0.0);
      const auto a = e.select(x), b = p.select(x);
      const bool same = a.removal_trace == b.removal_trace && a.selected == b.selected &&
                        a.fallback_used == b.fallback_used &&
                        predict(pool, a, x).label == predict(pool, b, x).label;
      mismatches += !same;
    }
  }
  verdict(2, "reduction property", mismatches == 0 && queries == 1000,
          std::to_string(mismatches) + " mismatches over " + std::to_string(queries) + " queries");
}

TEST(Acceptance, Criterion3_MetadataReproduction) {
  const auto table = table_one();
  const std::vector<std::string> names = {"ecoli-0_vs_1", "shuttle-c2-vs-c4", "glass1", "yeast4", "glass2",
                                          "iris0", "wisconsin", "ecoli2", "pima", "haberman",
                                          "vehicle0", "glass4"};
  std::size_t ok = 0;
  std::string failures;
  for (const auto& name : names) {
    const auto m = compute_meta(keel(name));
    const auto& want = table.at(name);
    char ir[16];
    std::snprintf(ir, sizeof ir, "%.2f", m.imbalance_ratio);
    const bool good = m.instances == want.instances && m.features == want.features &&
                      std::abs(std::stod(ir) - want.ir) < 1e-9 && std::abs(m.safe_pct - want.safe) <= 0.5;
    if (good) {
      ++ok;
    } else {
      failures += " " + name + fmt("(S %.2f vs %.2f)", m.safe_pct, want.safe);
    }
    std::printf("  %-18s I=%zu F=%zu IR=%s S=%.2f | table I=%zu F=%zu IR=%.2f S=%.2f\n", name.c_str(),
                m.instances, m.features, ir, m.safe_pct, want.instances, want.features, want.ir, want.safe);
  }
  verdict(3, "metadata reproduction", ok == names.size(),
          std::to_string(ok) + "/" + std::to_string(names.size()) + " datasets match;" +
              (failures.empty() ? std::string(" none off") : failures));
}

TEST(Acceptance, Criterion4_DivergenceTrend) {
  const auto t0 = Clock::now();
  const std::vector<std::string> safe = {"ecoli-0_vs_1", "iris0", "newthyroid2", "ecoli-0-1_vs_5", "glass6",
                                         "ecoli-0-3-4_vs_5"};
  const std::vector<std::string> unsafe = {"glass2", "haberman", "yeast-1_vs_7", "cleveland-0_vs_4",
                                           "glass5", "glass-0-1-5_vs_2"};
  const auto table = table_one();
  for (const auto& n : safe) ASSERT_GE(table.at(n).safe, 70.0) << n;
  for (const auto& n : unsafe) ASSERT_LE(table.at(n).safe, 30.0) << n;

  auto names = safe;
  names.insert(names.end(), unsafe.begin(), unsafe.end());
  const auto r = run_experiment(base_config(names, proposed_only()));
  ASSERT_TRUE(r.failures.empty() && r.load_errors.empty());

  bool ok = true;
  std::string detail;
  for (Measure m : all_measures) {
    const std::string label = std::string("PROPOSED-") + to_string(m);
    double sums[2] = {0, 0};
    std::size_t counts[2] = {0, 0};
    for (const auto& rec : r.records) {
      if (rec.technique != label) continue;
      const bool is_safe = std::find(safe.begin(), safe.end(), rec.dataset) != safe.end();
      sums[is_safe] += rec.divergence;
      ++counts[is_safe];
    }
    const double mu = sums[0] / static_cast<double>(counts[0]);
    const double ms = sums[1] / static_cast<double>(counts[1]);
    ok = ok && mu > ms;
    detail += std::string(to_string(m)) + fmt(" unsafe %.3f vs safe %.3f; ", mu, ms);
  }
  const double secs = seconds_since(t0);
  verdict(4, "divergence trend", ok && secs < 600.0, detail + fmt("%.0f s", secs));
}

TEST(Acceptance, Criterion5_DirectionalGmean) {
  const auto t0 = Clock::now();
  const auto unsafe = by_table_safety(false);
  ASSERT_GE(unsafe.size(), 10u);
  auto cfg = base_config(unsafe, {{Technique::knora_e, 7, std::nullopt}, {Technique::proposed, 7, Measure::lsci}});
  cfg.pool_size = 100;
  cfg.seeds = {1, 2, 3};
  const auto r = run_experiment(cfg);
  ASSERT_TRUE(r.failures.empty() && r.load_errors.empty());
  const auto s = r.scores("all");
  double e = 0.0, p = 0.0;
  for (std::size_t d = 0; d < s[0].gmean.size(); ++d) {
    e += s[0].gmean[d];
    p += s[1].gmean[d];
  }
  const double n = static_cast<double>(s[0].gmean.size());
  const double secs = seconds_since(t0);
  verdict(5, "directional G-mean", p / n - e / n > 0.0 && secs < 1800.0,
          std::to_string(s[0].gmean.size()) + " unsafe datasets, PROPOSED-LSCi " +
              fmt("%.4f vs KNORA-E %.4f, %.0f s", p / n, e / n, secs));
}

TEST(Acceptance, Criterion6_MetricExactness) {
  std::size_t bad = 0;
  ConfusionCounts c;
  c.tp = 3;
  c.fp = 1;
  c.fn = 2;
  c.tn = 4;
  bad += f1(c) != 6.0 / 9.0;
  bad += gmean(c) != std::sqrt(0.6 * 0.8);
  ConfusionCounts perfect;
  perfect.tp = 5;
  perfect.tn = 7;
  bad += f1(perfect) != 1.0 || gmean(perfect) != 1.0;
  ConfusionCounts none;
  none.fn = 4;
  none.tn = 6;
  bad += f1(none) != 0.0 || gmean(none) != 0.0;

  double worst = 0.0;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> value(0, 20);
  std::size_t tests = 0;
  for (std::size_t n = 5; n <= 12; ++n) {
    for (int rep = 0; rep < 25; ++rep) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = value(rng) / 20.0;
        b[i] = value(rng) / 20.0;
      }
      std::size_t nonzero = 0;
      for (std::size_t i = 0; i < n; ++i) nonzero += a[i] != b[i];
      if (nonzero < kWilcoxonMinPairs) continue;
      const double got = wilcoxon_signed_rank(a, b).p_value;
      worst = std::max(worst, std::abs(got - oracle::wilcoxon_enumerated(a, b)));
      ++tests;
    }
  }
  verdict(6, "metric exactness", bad == 0 && worst <= 1e-12,
          std::to_string(bad) + " metric mismatches, Wilcoxon max error " + fmt("%.3g", worst) + " over " +
              std::to_string(tests) + " samples");
}

TEST(Acceptance, Criterion7_EnnSafety) {
  std::size_t checked = 0, violations = 0, removed = 0;
  for (const auto& name : kSmoke) {
    const auto d = keel(name);
    std::vector<Dataset> dsels = {d};
    for (const auto& f : stratified_folds(d, 5, split_seed(name, 42))) dsels.push_back(d.subset(f.train_indices));
    for (const auto& dsel : dsels) {
      const auto e = enn_edit(dsel);
      const auto kept = dsel.subset(e.kept_indices);
      violations += kept.positives() != dsel.positives();
      violations += !kept.has_both_classes();
      violations += kept.size() + e.removed_count != dsel.size();
      removed += e.removed_count;
      ++checked;
    }
  }
  verdict(7, "ENN safety", violations == 0,
          std::to_string(checked) + " DSELs, " + std::to_string(removed) + " negatives removed, " +
              std::to_string(violations) + " violations");
}

TEST(Acceptance, Criterion8_OracleSoundness) {
  std::size_t audited = 0, unsound = 0;
  const Technique editing[] = {Technique::knora_e, Technique::knora_b, Technique::knora_bi, Technique::proposed};
  for (const auto& name : kSmoke) {
    if (audited >= 1000) break;
    const auto d = keel(name);
    for (const auto& f : stratified_folds(d, 5, split_seed(name, 8))) {
      const auto train = d.subset(f.train_indices);
      const auto pool = bagging_pool(train, 100, cell_seed(name, f.fold_id, 8));
      const OracleTable table(pool, train);
      const auto profile = estimate_all(train, Measure::lsci);
      for (Technique t : editing) {
        const SelectorConfig cfg{t, 7, t == Technique::proposed ? std::optional(Measure::lsci) : std::nullopt};
        const DynamicSelector sel(table, cfg, &profile);
        for (std::size_t q : f.test_indices) {
          if (audited >= 1000) break;
          const auto x = d.row(q);
          auto roc = sel.region(x);
          const auto r = sel.edit(roc);
          if (r.fallback_used) continue;
          for (auto i : r.removal_trace) roc.remove_member(i);
          bool sound = !roc.empty() && !r.selected.empty();
          for (auto j : r.selected)
            for (const auto& n : roc.members())
              sound = sound && pool[j].predict(train.row(n.index)) == train.label(n.index);
          unsound += !sound;
          ++audited;
        }
      }
    }
  }
  verdict(8, "oracle soundness", audited == 1000 && unsound == 0,
          std::to_string(unsound) + " unsound of " + std::to_string(audited) + " non-fallback selections");
}

TEST(Acceptance, Criterion9_Determinism) {
  auto cfg = base_config(kSmoke, all_techniques());
  cfg.trace_log = true;
  const auto base = fs::temp_directory_path() / "roced_acceptance_determinism";
  fs::remove_all(base);
  write_report_files(run_experiment(cfg), base / "a");
  write_report_files(run_experiment(cfg), base / "b");
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const auto other = base / "b" / entry.path().filename();
    differing += !fs::exists(other) || slurp(entry.path()) != slurp(other);
    ++files;
  }
  verdict(9, "determinism", files > 0 && differing == 0,
          std::to_string(differing) + " of " + std::to_string(files) + " report files differ");
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
