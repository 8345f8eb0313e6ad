#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rigorbench/scorelog.hpp"
#include "rigorbench/selection.hpp"

namespace rigorbench {

/// Mean and sample standard deviation (divisor N-1) of one
/// (algorithm, dataset) cell. `stddev` is 0 when count == 1.
struct CellStats {
  std::string algorithm;
  std::string dataset;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 1;

  friend bool operator==(const CellStats&, const CellStats&) = default;
};

struct PooledCell {
  CellStats stats;
  // Fewer than two samples in total: stddev is reported as 0.
  bool stddev_undefined = false;
};

/// n algorithms x m datasets of cell means, row-major.
class ScoreMatrix {
 public:
  ScoreMatrix(std::vector<std::string> algorithms, std::vector<std::string> datasets, std::vector<double> values,
              bool higher_is_better = true);

  std::size_t rows() const noexcept { return algorithms_.size(); }
  std::size_t cols() const noexcept { return datasets_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols() + j]; }
  const std::vector<std::string>& algorithms() const noexcept { return algorithms_; }
  const std::vector<std::string>& datasets() const noexcept { return datasets_; }
  const std::vector<double>& values() const noexcept { return values_; }
  bool higher_is_better() const noexcept { return higher_is_better_; }

 private:
  std::vector<std::string> algorithms_;
  std::vector<std::string> datasets_;
  std::vector<double> values_;
  bool higher_is_better_;
};

// Scalar strategies: statistics over per-run scalars. last_n: statistics
// over the pooled run x epoch samples (count = runs * n).
std::vector<CellStats> aggregate_runs(const SelectedScores& selected);

// Count-weighted mean and the total sum of squares rebuilt from per-run
// (mean, std, count). All summaries must share (algorithm, dataset).
PooledCell pooled_from_summaries(std::span<const SummaryRecord> summaries);

// Groups summaries by (algorithm, dataset). With `pool` each cell is
// pooled_from_summaries; otherwise every run mean counts as one sample.
std::vector<CellStats> cells_from_summaries(const std::vector<SummaryRecord>& summaries, bool pool);

// Empty order vectors fall back to sorted names. Throws InputError listing
// every missing cell.
ScoreMatrix build_score_matrix(const std::vector<CellStats>& cells, std::vector<std::string> algorithm_order,
                               std::vector<std::string> dataset_order, bool higher_is_better = true);

// cells.csv: algorithm,dataset,mean,std,count at full precision.
void write_cells_csv(const std::vector<CellStats>& cells, std::ostream& out);
std::vector<CellStats> parse_cells_csv(std::istream& in);

// Sample mean and standard deviation (two-pass).
struct Moments {
  double mean;
  double stddev;
};
Moments sample_moments(std::span<const double> values);

}  // namespace rigorbench
