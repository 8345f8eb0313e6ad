#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rigorbench/scorelog.hpp"

namespace rigorbench {

/// Model-selection rules mapping a per-epoch score trajectory to the score
/// reported for one (algorithm, run, dataset).
///
///  - best_epoch: oracle, maximum test score over all epochs, per dataset.
///  - last_n: the final n epochs; samples are kept so that aggregation can
///    pool them across runs.
///  - best_validation: one epoch per run, the argmax of the in-domain
///    validation score (earliest epoch on ties); the test score of every
///    dataset is read at that epoch.
struct SelectionStrategy {
  enum class Kind { best_epoch, last_n, best_validation };

  Kind kind = Kind::best_validation;
  std::size_t n = 30;

  static SelectionStrategy best_epoch() { return {Kind::best_epoch, 1}; }
  static SelectionStrategy last_n(std::size_t n) { return {Kind::last_n, n}; }
  static SelectionStrategy best_validation() { return {Kind::best_validation, 1}; }

  friend bool operator==(const SelectionStrategy&, const SelectionStrategy&) = default;
};

std::string to_string(const SelectionStrategy& strategy);
// Accepts "best-epoch", "last-n", "best-val". Throws InputError.
SelectionStrategy parse_strategy(std::string_view name, std::size_t n);

struct CellKey {
  std::string algorithm;
  int run;
  std::string dataset;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct SelectedScores {
  SelectionStrategy strategy;
  // Scalar strategies store exactly one sample; last_n stores n.
  std::map<CellKey, std::vector<double>> entries;
};

double select_best_epoch(std::span<const double> test_scores);
std::vector<double> select_last_n(std::span<const double> test_scores, std::size_t n);
// Zero-based index of the best validation epoch.
std::size_t best_validation_epoch(std::span<const double> validation_scores);
// Test score of each dataset at the best validation epoch.
std::vector<double> select_best_val(std::span<const double> validation_scores,
                                    const std::vector<std::vector<double>>& test_scores_per_dataset);

// Expects a RecordSet that passed validate(). Errors carry the
// (algorithm, run) context.
SelectedScores apply_strategy(const RecordSet& records, const SelectionStrategy& strategy);

}  // namespace rigorbench
