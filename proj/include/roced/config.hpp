#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "roced/error.hpp"
#include "roced/hardness.hpp"
#include "roced/keel.hpp"
#include "roced/selection.hpp"

namespace roced {

struct ExperimentConfig {
  std::filesystem::path dataset_dir = "data/keel";
  std::vector<std::string> dataset_names;  // empty = every dataset under dataset_dir
  std::vector<SelectorConfig> techniques;
  bool enn_enabled = false;
  std::size_t enn_k = 3;
  std::size_t pool_size = 100;
  std::size_t roc_k = 7;
  std::size_t kdn_k = 5;
  double epsilon = 1e-3;
  double learning_rate = 0.001;
  std::size_t epochs = 100;
  std::vector<std::uint64_t> seeds = {42};
  std::size_t folds = 5;
  bool use_official_partitions = false;
  bool standardize = false;
  std::filesystem::path output_dir = "out";
  bool trace_log = false;
  std::size_t threads = 0;

  void validate() const {
    if (techniques.empty()) throw Error("config: at least one technique is required");
    if (seeds.empty()) throw Error("config: at least one seed is required");
    if (pool_size == 0) throw Error("config: pool_size must be >= 1");
    if (roc_k == 0) throw Error("config: roc_k must be >= 1");
    if (folds < 2) throw Error("config: folds must be >= 2");
    for (const auto& t : techniques) t.validate();
  }

  HardnessParams hardness() const { return {kdn_k, epsilon}; }
};

// "KNORA-E", "PROPOSED-LSCi", or an object {"technique": ..., "measure": ...}.
inline SelectorConfig parse_selector(const nlohmann::json& j, std::size_t roc_k) {
  SelectorConfig c;
  c.roc_size = roc_k;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto dash = s.rfind('-');
    if (s.rfind("PROPOSED", 0) == 0) {
      if (dash == std::string::npos || dash < 8) throw Error("config: PROPOSED needs a measure suffix");
      c.technique = Technique::proposed;
      c.measure = parse_measure(s.substr(dash + 1));
    } else {
      c.technique = parse_technique(s);
    }
  } else if (j.is_object()) {
    c.technique = parse_technique(j.at("technique").get<std::string>());
    if (j.contains("measure") && !j.at("measure").is_null())
      c.measure = parse_measure(j.at("measure").get<std::string>());
    if (j.contains("roc_k")) c.roc_size = j.at("roc_k").get<std::size_t>();
  } else {
    throw Error("config: technique entries must be strings or objects");
  }
  c.validate();
  return c;
}

inline std::vector<std::string> list_keel_datasets(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    const auto name = entry.path().filename().string();
    if (std::filesystem::exists(keel_dataset_path(dir, name))) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Relative paths in the file are resolved against `base`.
inline ExperimentConfig parse_config(const nlohmann::json& j,
                                     const std::filesystem::path& base = {}) {
  static const char* known[] = {"dataset_dir", "dataset_names", "techniques", "enn_enabled",
                                "enn_k", "pool_size", "roc_k", "kdn_k", "epsilon",
                                "learning_rate", "epochs", "seeds", "folds",
                                "use_official_partitions", "standardize", "output_dir",
                                "trace_log", "threads"};
  if (!j.is_object()) throw Error("config: top level must be an object");
  for (const auto& [key, value] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw Error("config: unknown key '" + key + "'");

  ExperimentConfig c;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
  };
  if (j.contains("dataset_dir")) c.dataset_dir = resolve(j["dataset_dir"].get<std::string>());
  if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>());
  c.enn_enabled = j.value("enn_enabled", c.enn_enabled);
  c.enn_k = j.value("enn_k", c.enn_k);
  c.pool_size = j.value("pool_size", c.pool_size);
  c.roc_k = j.value("roc_k", c.roc_k);
  c.kdn_k = j.value("kdn_k", c.kdn_k);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.folds = j.value("folds", c.folds);
  c.use_official_partitions = j.value("use_official_partitions", c.use_official_partitions);
  c.standardize = j.value("standardize", c.standardize);
  c.trace_log = j.value("trace_log", c.trace_log);
  c.threads = j.value("threads", c.threads);
  if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();

  if (j.contains("dataset_names")) {
    const auto& names = j["dataset_names"];
    if (names.is_string()) {
      if (names.get<std::string>() != "all")
        throw Error("config: dataset_names must be a list or \"all\"");
    } else {
      c.dataset_names = names.get<std::vector<std::string>>();
    }
  }
  if (c.dataset_names.empty()) c.dataset_names = list_keel_datasets(c.dataset_dir);

  if (!j.contains("techniques")) throw Error("config: missing 'techniques'");
  for (const auto& t : j["techniques"]) c.techniques.push_back(parse_selector(t, c.roc_k));
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

}  // namespace roced
