#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roced/config.hpp"
#include "roced/experiment.hpp"
#include "roced/report.hpp"
#include "roced/roced.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const fs::path& config_path, int threads) {
  auto cfg = roced::load_config(config_path);
  if (threads >= 0) cfg.threads = static_cast<std::size_t>(threads);
  const auto report = roced::run_experiment(cfg);
  roced::write_report_files(report, cfg.output_dir);
  roced::write_summary(std::cout, report);
  std::cout << "wrote " << cfg.output_dir.string() << '\n';
  return report.load_errors.empty() && report.failures.empty() ? 0 : 2;
}

int cmd_meta(const fs::path& dir, std::vector<std::string> names, const std::string& scaling,
             std::size_t k, const std::string& out_path) {
  if (names.empty()) names = roced::list_keel_datasets(dir);
  const auto mode = scaling == "none" ? roced::Scaling::none : roced::Scaling::zscore;
  std::vector<roced::DatasetMeta> metas;
  int status = 0;
  for (const auto& name : names) {
    try {
      metas.push_back(roced::compute_meta(roced::load_keel_file(roced::keel_dataset_path(dir, name)), k, mode));
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << '\n';
      status = 2;
    }
  }
  if (out_path.empty()) {
    roced::write_meta_csv(std::cout, metas);
  } else {
    std::ofstream f(out_path);
    roced::write_meta_csv(f, metas);
  }
  return status;
}

struct TraceOptions {
  fs::path dir;
  std::string dataset;
  std::vector<std::string> measures = {"KDN", "KDNi", "LSC", "LSCi"};
  std::uint64_t seed = 42;
  std::size_t pool_size = 100;
  std::size_t roc_k = 7;
  bool enn = false;
  bool standardize = false;
  std::string out = "traces.jsonl";
  std::string divergence_out;
};

int cmd_trace(const TraceOptions& o) {
  roced::ExperimentConfig cfg;
  cfg.dataset_dir = o.dir;
  cfg.dataset_names = {o.dataset};
  cfg.pool_size = o.pool_size;
  cfg.roc_k = o.roc_k;
  cfg.enn_enabled = o.enn;
  cfg.standardize = o.standardize;
  cfg.seeds = {o.seed};
  cfg.trace_log = true;
  cfg.techniques.push_back({roced::Technique::knora_e, o.roc_k, std::nullopt});
  for (const auto& m : o.measures)
    cfg.techniques.push_back({roced::Technique::proposed, o.roc_k, roced::parse_measure(m)});
  const auto report = roced::run_experiment(cfg);
  for (const auto& [name, why] : report.load_errors) std::cerr << name << ": " << why << '\n';
  for (const auto& f : report.failures) std::cerr << f.dataset << " fold " << f.fold << ": " << f.reason << '\n';

  std::ofstream traces(o.out);
  for (const auto& l : report.trace_lines) traces << l << '\n';
  if (!o.divergence_out.empty()) {
    std::ofstream f(o.divergence_out);
    roced::write_divergence_csv(f, report);
  } else {
    roced::write_divergence_csv(std::cout, report);
  }
  return report.load_errors.empty() && report.failures.empty() ? 0 : 2;
}

int cmd_hardness(const fs::path& dir, const std::string& dataset, const std::string& measure,
                 std::size_t kdn_k, double epsilon, const std::string& out_path) {
  const auto d = roced::load_keel_file(roced::keel_dataset_path(dir, dataset));
  const auto p = roced::estimate_all(d, roced::parse_measure(measure), {kdn_k, epsilon});
  if (out_path.empty()) {
    roced::write_profile_csv(std::cout, p, d);
  } else {
    std::ofstream f(out_path);
    roced::write_profile_csv(f, p, d);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic ensemble selection with hardness-ordered region editing"};
  app.require_subcommand(1);

  fs::path config_path;
  int threads = -1;
  auto* run = app.add_subcommand("run", "run an experiment described by a JSON config");
  run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--threads", threads, "worker threads (0 = all cores); overrides the config");

  fs::path meta_dir;
  std::vector<std::string> meta_names;
  std::string scaling = "zscore";
  std::size_t k_type = 5;
  std::string meta_out;
  auto* meta = app.add_subcommand("meta", "dataset characteristics (I, F, IR, safe %)");
  meta->add_option("--dataset-dir", meta_dir, "directory of <name>/<name>.dat")->required()->check(CLI::ExistingDirectory);
  meta->add_option("--datasets", meta_names, "dataset names (default: all)")->delimiter(',');
  meta->add_option("--scaling", scaling, "feature scaling for safe typing")->check(CLI::IsMember({"zscore", "none"}));
  meta->add_option("--k", k_type, "neighbourhood size for safe typing");
  meta->add_option("--out", meta_out, "output CSV (default: stdout)");

  TraceOptions trace_opts;
  auto* trace = app.add_subcommand("trace", "per-query removal traces and divergence from distance order");
  trace->add_option("--dataset-dir", trace_opts.dir)->required()->check(CLI::ExistingDirectory);
  trace->add_option("--dataset", trace_opts.dataset)->required();
  trace->add_option("--measures", trace_opts.measures)->delimiter(',');
  trace->add_option("--seed", trace_opts.seed);
  trace->add_option("--pool-size", trace_opts.pool_size);
  trace->add_option("--roc-k", trace_opts.roc_k);
  trace->add_flag("--enn", trace_opts.enn, "edit the DSEL with ENN");
  trace->add_flag("--standardize", trace_opts.standardize);
  trace->add_option("--out", trace_opts.out, "JSON lines output");
  trace->add_option("--divergence-out", trace_opts.divergence_out, "divergence CSV (default: stdout)");

  fs::path h_dir;
  std::string h_dataset, h_measure = "LSCi", h_out;
  std::size_t h_k = 5;
  double h_eps = 1e-3;
  auto* hard = app.add_subcommand("hardness", "export a hardness profile as CSV");
  hard->add_option("--dataset-dir", h_dir)->required()->check(CLI::ExistingDirectory);
  hard->add_option("--dataset", h_dataset)->required();
  hard->add_option("--measure", h_measure)->check(CLI::IsMember({"KDN", "KDNi", "LSC", "LSCi"}));
  hard->add_option("--kdn-k", h_k);
  hard->add_option("--epsilon", h_eps);
  hard->add_option("--out", h_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, threads);
    if (*meta) return cmd_meta(meta_dir, meta_names, scaling, k_type, meta_out);
    if (*trace) return cmd_trace(trace_opts);
    if (*hard) return cmd_hardness(h_dir, h_dataset, h_measure, h_k, h_eps, h_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
