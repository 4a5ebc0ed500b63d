#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"

namespace roced {

struct KeelOptions {
  // Dataset name; defaults to the @relation value.
  std::string name;
  // Force this (normalized) label to be the positive class instead of mapping
  // the rarer label. Used when reading partition files against a full dataset,
  // where a single-class file is then also accepted.
  std::optional<std::string> positive_label;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && lower(s.substr(0, prefix.size())) == prefix;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline bool is_missing(std::string_view token) {
  return token.empty() || token == "?" || lower(token) == "<null>";
}

inline std::optional<double> parse_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

struct KeelAttribute {
  std::string name;
  bool nominal = false;
};

}  // namespace detail

// Parses a two-class KEEL .dat stream. Rows with missing values are skipped
// and counted in Dataset::dropped_rows().
inline Dataset load_keel(std::istream& in, const KeelOptions& options = {}) {
  using namespace detail;
  std::vector<KeelAttribute> attributes;
  std::string relation;
  std::optional<std::string> output_name;
  bool in_data = false;

  std::vector<double> flat;
  std::vector<std::string> raw_labels;
  std::size_t dropped = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '%') continue;

    if (!in_data) {
      if (s.front() != '@') throw ParseError("expected a header line starting with '@'", lineno);
      if (starts_with_ci(s, "@relation")) {
        relation = std::string(trim(s.substr(9)));
      } else if (starts_with_ci(s, "@attribute")) {
        auto rest = trim(s.substr(10));
        const auto name_end = rest.find_first_of(" \t{");
        if (name_end == std::string_view::npos)
          throw ParseError("attribute without a type", lineno);
        KeelAttribute attr;
        attr.name = std::string(rest.substr(0, name_end));
        const auto type = trim(rest.substr(name_end));
        if (!type.empty() && type.front() == '{') {
          attr.nominal = true;
        } else if (!(starts_with_ci(type, "real") || starts_with_ci(type, "integer") ||
                     starts_with_ci(type, "numeric"))) {
          throw ParseError("unsupported attribute type '" + std::string(type) + "'", lineno);
        }
        attributes.push_back(std::move(attr));
      } else if (starts_with_ci(s, "@inputs")) {
        // informational; inputs are every attribute except the class
      } else if (starts_with_ci(s, "@outputs") || starts_with_ci(s, "@output")) {
        const auto skip = starts_with_ci(s, "@outputs") ? 8 : 7;
        output_name = std::string(trim(s.substr(skip)));
      } else if (starts_with_ci(s, "@data")) {
        if (attributes.size() < 2)
          throw ParseError("need at least one input attribute and a class attribute", lineno);
        if (!attributes.back().nominal)
          throw ParseError("class attribute '" + attributes.back().name + "' is not nominal",
                           lineno);
        if (output_name && *output_name != attributes.back().name)
          throw ParseError("class attribute must be the last attribute", lineno);
        for (std::size_t j = 0; j + 1 < attributes.size(); ++j)
          if (attributes[j].nominal)
            throw ParseError("nominal input attribute '" + attributes[j].name +
                                 "' is not supported",
                             lineno);
        in_data = true;
      } else {
        throw ParseError("unknown header keyword", lineno);
      }
      continue;
    }

    if (s.front() == '@') throw ParseError("header line after @data", lineno);
    const auto tokens = split(s, ',');
    if (tokens.size() != attributes.size())
      throw ParseError("expected " + std::to_string(attributes.size()) + " values, got " +
                           std::to_string(tokens.size()),
                       lineno);
    if (std::any_of(tokens.begin(), tokens.end(), is_missing)) {
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j + 1 < tokens.size(); ++j) {
      const auto v = parse_real(tokens[j]);
      if (!v) throw ParseError("non-numeric feature value '" + std::string(tokens[j]) + "'", lineno);
      flat.push_back(*v);
    }
    raw_labels.push_back(lower(tokens.back()));
  }
  if (!in_data) throw ParseError("missing @data section", lineno);

  std::map<std::string, std::size_t> counts;
  for (const auto& l : raw_labels) ++counts[l];
  if (counts.size() > 2)
    throw Error("more than two classes found; only binary problems are supported");

  std::string positive, negative;
  if (options.positive_label) {
    positive = lower(trim(*options.positive_label));
    for (const auto& [l, c] : counts)
      if (l != positive) negative = l;
  } else {
    if (counts.size() < 2) throw Error("fewer than two classes found");
    auto a = counts.begin(), b = std::next(a);
    // rarer label is positive; on a tie keep a literal "positive", else the
    // lexicographically first label
    bool a_positive = a->second < b->second ||
                      (a->second == b->second && (a->first == "positive" || b->first != "positive"));
    positive = a_positive ? a->first : b->first;
    negative = a_positive ? b->first : a->first;
  }

  std::vector<Label> labels;
  labels.reserve(raw_labels.size());
  for (const auto& l : raw_labels) labels.push_back(l == positive ? Label::positive : Label::negative);

  std::vector<std::string> names;
  for (std::size_t j = 0; j + 1 < attributes.size(); ++j) names.push_back(attributes[j].name);

  const std::size_t n_rows = labels.size();
  Dataset d(options.name.empty() ? relation : options.name, n_rows, attributes.size() - 1,
            std::move(flat), std::move(labels), std::move(names));
  d.set_label_names(positive, negative);
  d.set_dropped_rows(dropped);
  if (!options.positive_label && d.size() < 2) throw Error("dataset needs at least two rows");
  return d;
}

inline Dataset load_keel_text(std::string_view text, const KeelOptions& options = {}) {
  std::istringstream in{std::string(text)};
  return load_keel(in, options);
}

inline Dataset load_keel_file(const std::filesystem::path& path, KeelOptions options = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  if (options.name.empty()) options.name = path.stem().string();
  try {
    return load_keel(in, options);
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

// <dir>/<name>/<name>.dat
inline std::filesystem::path keel_dataset_path(const std::filesystem::path& dir,
                                               const std::string& name) {
  return dir / name / (name + ".dat");
}

// <dir>/<name>/<name>-<k>-<i>tra.dat and ...tst.dat, i = 1..k
inline std::vector<std::pair<Dataset, Dataset>> load_keel_partition_files(
    const std::filesystem::path& dir, const Dataset& full, std::size_t k = 5) {
  std::vector<std::pair<Dataset, Dataset>> pairs;
  KeelOptions opts;
  opts.name = full.name();
  opts.positive_label = full.positive_name();
  for (std::size_t i = 1; i <= k; ++i) {
    const auto stem = full.name() + "-" + std::to_string(k) + "-" + std::to_string(i);
    pairs.emplace_back(load_keel_file(dir / full.name() / (stem + "tra.dat"), opts),
                       load_keel_file(dir / full.name() / (stem + "tst.dat"), opts));
  }
  return pairs;
}

}  // namespace roced
