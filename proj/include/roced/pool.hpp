#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/error.hpp"
#include "roced/parallel.hpp"
#include "roced/rng.hpp"

namespace roced {

// Hyperplane classifier: positive iff w.x + b > 0.
struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;

  double decision(std::span<const double> x) const {
    if (x.size() != weights.size()) throw Error("classifier: dimension mismatch");
    double acc = bias;
    for (std::size_t j = 0; j < x.size(); ++j) acc += weights[j] * x[j];
    return acc;
  }

  Label predict(std::span<const double> x) const {
    return decision(x) > 0.0 ? Label::positive : Label::negative;
  }

  friend bool operator==(const LinearClassifier&, const LinearClassifier&) = default;
};

inline constexpr double kProbaFloor = 1e-12;

// Sigmoid of the decision value, clamped away from 0 and 1.
inline double sigmoid(double z) noexcept {
  const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return std::clamp(p, kProbaFloor, 1.0 - kProbaFloor);
}

inline double predict_proba(const LinearClassifier& c, std::span<const double> x) {
  return sigmoid(c.decision(x));
}

struct PerceptronParams {
  double learning_rate = 0.001;
  std::size_t epochs = 100;
};

// Rosenblatt perceptron, zero initialised, y in {0,1}. Every epoch visits the
// given rows in a fresh seeded shuffle; no early stopping.
inline LinearClassifier train_perceptron(const Dataset& data, std::span<const std::size_t> rows,
                                         const PerceptronParams& params, std::uint64_t seed) {
  bool pos = false, neg = false;
  for (std::size_t i : rows) {
    if (i >= data.size()) throw Error("train_perceptron: row out of range");
    (data.label(i) == Label::positive ? pos : neg) = true;
  }
  if (!pos || !neg) throw Error("train_perceptron: training rows must contain both classes");

  LinearClassifier c;
  c.weights.assign(data.dims(), 0.0);
  std::vector<std::size_t> order(rows.begin(), rows.end());
  Engine rng(seed);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const auto x = data.row(i);
      const double target = data.label(i) == Label::positive ? 1.0 : 0.0;
      const double output = c.decision(x) > 0.0 ? 1.0 : 0.0;
      const double update = params.learning_rate * (target - output);
      if (update == 0.0) continue;
      for (std::size_t j = 0; j < x.size(); ++j) c.weights[j] += update * x[j];
      c.bias += update;
    }
  }
  return c;
}

inline LinearClassifier train_perceptron(const Dataset& data, const PerceptronParams& params,
                                         std::uint64_t seed) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return train_perceptron(data, rows, params, seed);
}

struct TrainedPool {
  std::vector<LinearClassifier> members;
  std::uint64_t seed = 0;
  std::uint64_t train_fingerprint = 0;

  std::size_t size() const noexcept { return members.size(); }
  const LinearClassifier& operator[](std::size_t j) const noexcept { return members[j]; }

  // Hash of the fitted weights; equal pools have equal digests.
  std::uint64_t weights_fingerprint() const noexcept {
    Fnv1a h;
    for (const auto& m : members) {
      h.update(m.weights.data(), m.weights.size() * sizeof(double));
      h.update_value(m.bias);
    }
    return h.digest();
  }
};

inline std::uint64_t fingerprint(const Dataset& data, std::size_t pool_size,
                                 const PerceptronParams& params, std::uint64_t seed) {
  Fnv1a h;
  h.update(data.features().data(), data.features().size() * sizeof(double));
  h.update(data.labels().data(), data.labels().size() * sizeof(Label));
  h.update_value(pool_size);
  h.update_value(params.learning_rate);
  h.update_value(params.epochs);
  h.update_value(seed);
  return h.digest();
}

inline constexpr std::size_t kMaxBootstrapRetries = 1000;

struct BaggingParams {
  std::size_t pool_size = 100;
  PerceptronParams perceptron;
  std::size_t threads = 1;
};

// Bootstrap of size N drawn with replacement; redrawn while it lacks a class.
inline std::vector<std::size_t> draw_bootstrap(const Dataset& data, std::uint64_t seed) {
  Engine rng(seed);
  std::vector<std::size_t> rows(data.size());
  for (std::size_t attempt = 0; attempt < kMaxBootstrapRetries; ++attempt) {
    bool pos = false, neg = false;
    for (auto& r : rows) {
      r = static_cast<std::size_t>(bounded(rng, data.size()));
      (data.label(r) == Label::positive ? pos : neg) = true;
    }
    if (pos && neg) return rows;
  }
  throw Error("bagging: no two-class bootstrap after " + std::to_string(kMaxBootstrapRetries) +
              " draws; minority class too small");
}

// Bagged pool of perceptrons. Member j uses seeds derived from (seed, j) only,
// so the pool does not depend on the thread schedule.
inline TrainedPool bagging_pool(const Dataset& train, const BaggingParams& params,
                                std::uint64_t seed) {
  if (params.pool_size == 0) throw Error("bagging: pool size must be >= 1");
  if (!train.has_both_classes()) throw Error("bagging: training data must contain both classes");
  TrainedPool pool;
  pool.seed = seed;
  pool.train_fingerprint = fingerprint(train, params.pool_size, params.perceptron, seed);
  pool.members.resize(params.pool_size);
  parallel_for(params.pool_size, params.threads, [&](std::size_t j) {
    const std::uint64_t member_seed = derive_seed(seed, j);
    const auto rows = draw_bootstrap(train, derive_seed(member_seed, 1));
    pool.members[j] = train_perceptron(train, rows, params.perceptron, derive_seed(member_seed, 2));
  });
  return pool;
}

inline TrainedPool bagging_pool(const Dataset& train, std::size_t pool_size, std::uint64_t seed) {
  BaggingParams p;
  p.pool_size = pool_size;
  return bagging_pool(train, p, seed);
}

// member,bias,w0,w1,...  (full precision)
inline void write_pool_csv(std::ostream& out, const TrainedPool& pool) {
  const auto old = out.precision(17);
  out << "# seed=" << pool.seed << " fingerprint=" << pool.train_fingerprint << '\n';
  for (std::size_t j = 0; j < pool.size(); ++j) {
    out << j << ',' << pool[j].bias;
    for (double w : pool[j].weights) out << ',' << w;
    out << '\n';
  }
  out.precision(old);
}

inline TrainedPool read_pool_csv(std::istream& in) {
  TrainedPool pool;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream meta(line.substr(1));
      std::string token;
      while (meta >> token) {
        if (token.rfind("seed=", 0) == 0) pool.seed = std::stoull(token.substr(5));
        if (token.rfind("fingerprint=", 0) == 0) pool.train_fingerprint = std::stoull(token.substr(12));
      }
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    std::getline(row, cell, ',');
    if (std::stoull(cell) != pool.size()) throw Error("pool csv: members out of order");
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (values.empty()) throw Error("pool csv: missing bias");
    LinearClassifier c;
    c.bias = values.front();
    c.weights.assign(values.begin() + 1, values.end());
    if (!pool.members.empty() && c.weights.size() != pool.members.front().weights.size())
      throw Error("pool csv: ragged weight rows");
    pool.members.push_back(std::move(c));
  }
  if (pool.members.empty()) throw Error("pool csv: no members");
  return pool;
}

}  // namespace roced
