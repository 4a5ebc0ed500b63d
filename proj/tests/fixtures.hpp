#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "roced/dataset.hpp"
#include "roced/pool.hpp"

namespace fixtures {

using roced::Dataset;
using roced::Label;

struct BlobSpec {
  std::size_t n = 200;
  std::size_t features = 2;
  double positive_share = 0.3;
  double separation = 1.5;  // distance between class centres, in stddevs
  double grid = 0.0;        // > 0 rounds coordinates, creating distance ties and duplicates
};

// Two Gaussian classes; positives are the first round(n * share) rows.
inline Dataset blobs(const BlobSpec& spec, std::uint64_t seed, std::string name = "blobs") {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto n_pos = static_cast<std::size_t>(std::lround(spec.n * spec.positive_share));
  std::vector<double> flat;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const bool pos = i < n_pos;
    for (std::size_t j = 0; j < spec.features; ++j) {
      double v = noise(rng) + (pos && j == 0 ? spec.separation : 0.0);
      if (spec.grid > 0.0) v = std::round(v / spec.grid) * spec.grid;
      flat.push_back(v);
    }
    labels.push_back(pos ? Label::positive : Label::negative);
  }
  return Dataset(std::move(name), spec.n, spec.features, std::move(flat), std::move(labels));
}

inline std::vector<double> random_query(std::size_t dims, std::mt19937_64& rng, double grid = 0.0) {
  std::normal_distribution<double> noise(0.5, 1.2);
  std::vector<double> q(dims);
  for (auto& v : q) {
    v = noise(rng);
    if (grid > 0.0) v = std::round(v / grid) * grid;
  }
  return q;
}

inline roced::LinearClassifier line(std::vector<double> w, double b) {
  return roced::LinearClassifier{std::move(w), b};
}

inline roced::TrainedPool pool_of(std::vector<roced::LinearClassifier> members) {
  roced::TrainedPool p;
  p.members = std::move(members);
  return p;
}

// Toy region with seven neighbours x1..x7 at increasing distance from the
// query (0.05, 0), two hyperplanes c1: x > 0 and c2: x > 1 (both positive to
// the right). c1 errs only on x1, c2 errs only on x5. Rows 0..6 are x1..x7;
// rows 7.. are far-away filler.
struct ToyRegion {
  Dataset dsel;
  roced::TrainedPool pool;
  std::vector<double> query{0.05, 0.0};
};

inline ToyRegion toy_region() {
  ToyRegion t;
  t.dsel = Dataset::from_rows("toy",
                              {{0.5, 0.3},    // x1 negative (c1 wrong)
                               {-0.9, 0.5},   // x2 negative
                               {1.3, 0.2},    // x3 positive
                               {-1.2, -0.9},  // x4 negative
                               {0.8, -1.5},   // x5 positive (c2 wrong)
                               {-1.8, 0.6},   // x6 negative
                               {2.0, -0.4},   // x7 positive
                               {9.0, 9.0},
                               {-9.0, 9.0},
                               {9.0, -9.0}},
                              {Label::negative, Label::negative, Label::positive, Label::negative,
                               Label::positive, Label::negative, Label::positive, Label::positive,
                               Label::negative, Label::positive});
  t.pool = pool_of({line({1.0, 0.0}, 0.0), line({1.0, 0.0}, -1.0)});
  return t;
}

}  // namespace fixtures
