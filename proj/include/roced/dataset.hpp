#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roced/error.hpp"

namespace roced {

// Two-class labels. The positive class is always the minority class of a
// loaded dataset.
enum class Label : std::uint8_t { negative = 0, positive = 1 };

constexpr Label opposite(Label y) noexcept {
  return y == Label::positive ? Label::negative : Label::positive;
}

constexpr const char* to_string(Label y) noexcept {
  return y == Label::positive ? "positive" : "negative";
}

// Dense, row-major, immutable feature matrix with binary labels.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::string name, std::size_t rows, std::size_t cols, std::vector<double> features,
          std::vector<Label> labels, std::vector<std::string> feature_names = {})
      : name_(std::move(name)),
        rows_(rows),
        cols_(cols),
        features_(std::move(features)),
        labels_(std::move(labels)),
        feature_names_(std::move(feature_names)) {
    if (features_.size() != rows_ * cols_)
      throw Error("dataset '" + name_ + "': feature buffer does not match " +
                  std::to_string(rows_) + "x" + std::to_string(cols_));
    if (labels_.size() != rows_) throw Error("dataset '" + name_ + "': label count mismatch");
    if (feature_names_.empty()) {
      for (std::size_t j = 0; j < cols_; ++j) feature_names_.push_back("x" + std::to_string(j));
    } else if (feature_names_.size() != cols_) {
      throw Error("dataset '" + name_ + "': feature name count mismatch");
    }
    for (double v : features_)
      if (!std::isfinite(v)) throw Error("dataset '" + name_ + "': non-finite feature value");
    for (Label y : labels_)
      if (y == Label::positive) ++positives_;
  }

  // Convenience for tests and small fixtures.
  static Dataset from_rows(std::string name, const std::vector<std::vector<double>>& rows,
                           std::vector<Label> labels) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * cols);
    for (const auto& r : rows) {
      if (r.size() != cols) throw Error("from_rows: ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Dataset(std::move(name), rows.size(), cols, std::move(flat), std::move(labels));
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return rows_; }
  std::size_t dims() const noexcept { return cols_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {features_.data() + i * cols_, cols_};
  }
  Label label(std::size_t i) const noexcept { return labels_[i]; }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const double> features() const noexcept { return features_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

  std::size_t positives() const noexcept { return positives_; }
  std::size_t negatives() const noexcept { return rows_ - positives_; }
  std::size_t count(Label y) const noexcept {
    return y == Label::positive ? positives() : negatives();
  }
  bool has_both_classes() const noexcept { return positives() > 0 && negatives() > 0; }

  // Original label strings from the source file, if any.
  const std::string& positive_name() const noexcept { return positive_name_; }
  const std::string& negative_name() const noexcept { return negative_name_; }
  void set_label_names(std::string positive, std::string negative) {
    positive_name_ = std::move(positive);
    negative_name_ = std::move(negative);
  }

  // Rows skipped at load time because of missing values.
  std::size_t dropped_rows() const noexcept { return dropped_rows_; }
  void set_dropped_rows(std::size_t n) noexcept { dropped_rows_ = n; }

  // Row subset in the given order; indices may repeat (bootstrap samples).
  Dataset subset(std::span<const std::size_t> indices, std::string name = {}) const {
    std::vector<double> flat;
    flat.reserve(indices.size() * cols_);
    std::vector<Label> labels;
    labels.reserve(indices.size());
    for (std::size_t i : indices) {
      if (i >= rows_) throw Error("subset: index out of range");
      auto r = row(i);
      flat.insert(flat.end(), r.begin(), r.end());
      labels.push_back(labels_[i]);
    }
    Dataset out(name.empty() ? name_ : std::move(name), indices.size(), cols_, std::move(flat),
                std::move(labels), feature_names_);
    out.set_label_names(positive_name_, negative_name_);
    return out;
  }

 private:
  std::string name_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> features_;
  std::vector<Label> labels_;
  std::vector<std::string> feature_names_;
  std::size_t positives_ = 0;
  std::string positive_name_ = "positive";
  std::string negative_name_ = "negative";
  std::size_t dropped_rows_ = 0;
};

// Per-feature affine map x' = (x - mean) / stddev (population stddev,
// constant features left centred but unscaled).
class ZScore {
 public:
  ZScore() = default;

  static ZScore fit(const Dataset& d) {
    ZScore z;
    const std::size_t n = d.size(), f = d.dims();
    z.mean_.assign(f, 0.0);
    z.scale_.assign(f, 1.0);
    if (n == 0) return z;
    for (std::size_t i = 0; i < n; ++i) {
      auto r = d.row(i);
      for (std::size_t j = 0; j < f; ++j) z.mean_[j] += r[j];
    }
    for (double& m : z.mean_) m /= static_cast<double>(n);
    std::vector<double> var(f, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto r = d.row(i);
      for (std::size_t j = 0; j < f; ++j) {
        const double c = r[j] - z.mean_[j];
        var[j] += c * c;
      }
    }
    for (std::size_t j = 0; j < f; ++j) {
      const double sd = std::sqrt(var[j] / static_cast<double>(n));
      z.scale_[j] = sd > 0.0 ? sd : 1.0;
    }
    return z;
  }

  Dataset apply(const Dataset& d) const {
    if (d.dims() != mean_.size()) throw Error("ZScore: dimension mismatch");
    std::vector<double> flat(d.features().begin(), d.features().end());
    const std::size_t f = d.dims();
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const std::size_t j = i % f;
      flat[i] = (flat[i] - mean_[j]) / scale_[j];
    }
    Dataset out(d.name(), d.size(), f, std::move(flat),
                std::vector<Label>(d.labels().begin(), d.labels().end()), d.feature_names());
    out.set_label_names(d.positive_name(), d.negative_name());
    out.set_dropped_rows(d.dropped_rows());
    return out;
  }

  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& scale() const noexcept { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

}  // namespace roced
