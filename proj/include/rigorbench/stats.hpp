#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rigorbench/aggregate.hpp"
#include "rigorbench/parallel.hpp"

namespace rigorbench {

/// Within-dataset ranks, rank 1 = best, ties share the mean of their
/// positions. `ranks` is n x m row-major (algorithm-major).
struct RankMatrix {
  std::vector<std::string> algorithms;
  std::size_t datasets = 0;
  std::vector<double> ranks;
  std::vector<double> average_ranks;

  std::size_t n() const noexcept { return algorithms.size(); }
  std::size_t m() const noexcept { return datasets; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return ranks[i * datasets + j]; }
};

struct ImanDavenport {
  double ff = 0.0;
  // chi2 reached m(n-1): every dataset ranks the algorithms identically and
  // F_F is unbounded.
  bool degenerate = false;
};

struct FriedmanResult {
  double chi2 = 0.0;
  double ff = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p_value = 1.0;
  // Upper tail of chi2 itself, for reference next to the F-based p.
  double chi2_p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  bool degenerate = false;
};

struct PairComparison {
  double rank_diff = 0.0;
  double standard_error = 0.0;
  double q = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

/// Symmetric n x n table of Nemenyi comparisons; diagonal entries are
/// unused.
struct NemenyiMatrix {
  std::vector<std::string> algorithms;
  double alpha = 0.05;
  std::vector<PairComparison> pairs;

  std::size_t n() const noexcept { return algorithms.size(); }
  const PairComparison& operator()(std::size_t i, std::size_t j) const noexcept { return pairs[i * n() + j]; }
};

RankMatrix rank_columns(const ScoreMatrix& scores);

// Friedman statistic without tie correction.
double friedman_chi2(const RankMatrix& ranks);

// Throws StatsError when chi2 lies outside [0, m(n-1)].
ImanDavenport iman_davenport(double chi2, std::size_t n, std::size_t m);

// Omnibus test; needs n >= 2 algorithms and m >= 2 datasets.
FriedmanResult friedman_test(const ScoreMatrix& scores, double alpha = 0.05);

// Post-hoc pairwise test on average ranks: SE = sqrt(n(n+1) / (6m)),
// q = |R_i - R_j| / SE, p from the studentized range at q * sqrt(2).
NemenyiMatrix nemenyi_test(const RankMatrix& ranks, double alpha = 0.05);

/// Permutation reference distribution for the Friedman statistic: ranks
/// are shuffled independently inside each dataset. The observed
/// arrangement is always counted, so p > 0.
struct PermutationMode {
  enum class Kind { exact, monte_carlo };
  Kind kind = Kind::exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static PermutationMode exact() { return {Kind::exact, 0, 0}; }
  static PermutationMode monte_carlo(std::uint64_t samples, std::uint64_t seed) {
    return {Kind::monte_carlo, samples, seed};
  }
};

inline constexpr double kMaxExactPermutations = 1e7;

struct PermutationResult {
  double p_value = 1.0;
  std::uint64_t extreme = 0;  // arrangements with chi2 >= observed
  std::uint64_t total = 0;
};

PermutationResult permutation_friedman(const ScoreMatrix& scores, PermutationMode mode,
                                       Execution exec = Execution::parallel);

}  // namespace rigorbench
