#include "rigorbench/selection.hpp"

#include <algorithm>
#include <utility>

#include "rigorbench/error.hpp"

namespace rigorbench {

std::string to_string(const SelectionStrategy& s) {
  switch (s.kind) {
    case SelectionStrategy::Kind::best_epoch: return "best-epoch";
    case SelectionStrategy::Kind::last_n: return "last-n (n=" + std::to_string(s.n) + ")";
    case SelectionStrategy::Kind::best_validation: return "best-val";
  }
  return "unknown";
}

SelectionStrategy parse_strategy(std::string_view name, std::size_t n) {
  if (name == "best-epoch") return SelectionStrategy::best_epoch();
  if (name == "best-val") return SelectionStrategy::best_validation();
  if (name == "last-n") {
    if (n < 1) throw InputError("--n must be >= 1");
    return SelectionStrategy::last_n(n);
  }
  throw InputError("unknown strategy \"" + std::string(name) + "\" (expected best-epoch, last-n or best-val)");
}

double select_best_epoch(std::span<const double> test_scores) {
  if (test_scores.empty()) throw InputError("best-epoch selection on an empty score sequence");
  return *std::max_element(test_scores.begin(), test_scores.end());
}

std::vector<double> select_last_n(std::span<const double> test_scores, std::size_t n) {
  if (n < 1) throw InputError("last-n selection requires n >= 1");
  if (test_scores.size() < n)
    throw InputError("last-n selection needs " + std::to_string(n) + " epochs, only " +
                     std::to_string(test_scores.size()) + " available");
  auto tail = test_scores.last(n);
  return {tail.begin(), tail.end()};
}

std::size_t best_validation_epoch(std::span<const double> validation_scores) {
  if (validation_scores.empty()) throw InputError("best-val selection: missing validation series");
  // max_element returns the first maximum, i.e. the earliest epoch.
  return static_cast<std::size_t>(
      std::max_element(validation_scores.begin(), validation_scores.end()) - validation_scores.begin());
}

std::vector<double> select_best_val(std::span<const double> validation_scores,
                                    const std::vector<std::vector<double>>& test_scores_per_dataset) {
  const std::size_t best = best_validation_epoch(validation_scores);
  std::vector<double> out;
  out.reserve(test_scores_per_dataset.size());
  for (const auto& test : test_scores_per_dataset) {
    if (test.size() != validation_scores.size())
      throw InputError("best-val selection: validation series has " + std::to_string(validation_scores.size()) +
                       " epochs, test series has " + std::to_string(test.size()));
    out.push_back(test[best]);
  }
  return out;
}

namespace {

struct Series {
  std::string metric;
  std::vector<std::pair<int, double>> points;  // (epoch, value)
};

std::vector<double> contiguous_values(Series& s, const std::string& context) {
  std::sort(s.points.begin(), s.points.end());
  std::vector<double> values;
  values.reserve(s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (s.points[i].first != static_cast<int>(i) + 1)
      throw InputError(context + ": epochs are not contiguous from 1 (missing epoch " + std::to_string(i + 1) +
                       ")");
    values.push_back(s.points[i].second);
  }
  return values;
}

}  // namespace

SelectedScores apply_strategy(const RecordSet& records, const SelectionStrategy& strategy) {
  using Kind = SelectionStrategy::Kind;
  if (strategy.kind == Kind::last_n && strategy.n < 1) throw InputError("last-n selection requires n >= 1");

  // (algorithm, run) -> dataset -> series, separately per split.
  struct RunSeries {
    std::map<std::string, Series> test;
    std::map<std::string, Series> validation;
  };
  std::map<std::pair<std::string, int>, RunSeries> runs;
  for (const auto& r : records.records()) {
    auto& run = runs[{r.algorithm, r.run}];
    auto& series = (r.split == Split::test ? run.test : run.validation)[r.dataset];
    if (series.points.empty()) series.metric = r.metric;
    if (series.metric != r.metric)
      throw InputError(r.algorithm + " run " + std::to_string(r.run) + " " + r.dataset +
                       ": more than one metric (" + series.metric + ", " + r.metric + ")");
    series.points.emplace_back(r.epoch, r.value);
  }

  SelectedScores out;
  out.strategy = strategy;
  for (auto& [key, run] : runs) {
    const std::string context = key.first + " run " + std::to_string(key.second);
    try {
      if (strategy.kind == Kind::best_validation) {
        if (run.validation.empty()) throw InputError("missing validation series");
        if (run.validation.size() > 1) throw InputError("validation split present on more than one dataset");
        const auto validation = contiguous_values(run.validation.begin()->second, "validation series");
        std::vector<std::string> names;
        std::vector<std::vector<double>> tests;
        for (auto& [dataset, series] : run.test) {
          names.push_back(dataset);
          tests.push_back(contiguous_values(series, dataset));
        }
        const auto picked = select_best_val(validation, tests);
        for (std::size_t i = 0; i < names.size(); ++i)
          out.entries[{key.first, key.second, names[i]}] = {picked[i]};
        continue;
      }
      for (auto& [dataset, series] : run.test) {
        const auto values = contiguous_values(series, dataset);
        auto& slot = out.entries[{key.first, key.second, dataset}];
        if (strategy.kind == Kind::best_epoch)
          slot = {select_best_epoch(values)};
        else
          slot = select_last_n(values, strategy.n);
      }
    } catch (const InputError& e) {
      throw InputError(context + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rigorbench
