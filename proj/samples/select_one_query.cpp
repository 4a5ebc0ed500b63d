// Builds a pool on one training fold of a KEEL dataset and shows how
// KNORA-E and the hardness-ordered editing treat the same test queries.

#include <iostream>

#include "roced/roced.hpp"

int main(int argc, char** argv) {
  const std::string name = argc > 1 ? argv[1] : "glass1";
  const auto data = roced::load_keel_file(roced::keel_dataset_path(ROCED_DATA_DIR, name));
  const auto folds = roced::stratified_folds(data, 5, 7);
  const auto train = data.subset(folds[0].train_indices);
  const auto test = data.subset(folds[0].test_indices);

  const auto pool = roced::bagging_pool(train, 100, 7);
  const roced::OracleTable table(pool, train);
  const auto profile = roced::estimate_all(train, roced::Measure::lsci);

  const roced::DynamicSelector knora_e(table, {roced::Technique::knora_e, 7, std::nullopt});
  const roced::DynamicSelector proposed(table, {roced::Technique::proposed, 7, roced::Measure::lsci},
                                        &profile);

  auto print = [](const char* label, const roced::SelectionResult& r) {
    std::cout << "  " << label << " removed [";
    for (std::size_t i = 0; i < r.removal_trace.size(); ++i)
      std::cout << (i ? " " : "") << r.removal_trace[i];
    std::cout << "] selected " << r.selected.size() << (r.fallback_used ? " (fallback)" : "") << '\n';
  };

  for (std::size_t q = 0; q < std::min<std::size_t>(test.size(), 5); ++q) {
    const auto x = test.row(q);
    std::cout << "query " << folds[0].test_indices[q] << " (" << roced::to_string(test.label(q)) << ")\n";
    print("KNORA-E      ", knora_e.select(x));
    print("PROPOSED-LSCi", proposed.select(x));
    std::cout << "  predictions: " << roced::to_string(knora_e.predict(x).label) << " / "
              << roced::to_string(proposed.predict(x).label) << '\n';
  }
}
