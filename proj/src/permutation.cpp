#include <algorithm>
#include <cmath>
#include <numeric>

#include "rigorbench/error.hpp"
#include "rigorbench/stats.hpp"

namespace rigorbench {

namespace {

// Ranks are multiples of 1/2; doubling them keeps every rank sum, and the
// compared statistic sum_i S_i^2, in exact integer arithmetic. chi2 is an
// increasing affine function of that sum.
struct DoubledRanks {
  std::size_t n;
  std::size_t m;
  std::vector<std::int64_t> columns;  // column-major: columns[j * n + i]

  std::int64_t statistic(const std::vector<std::int64_t>& sums) const {
    std::int64_t total = 0;
    for (auto s : sums) total += s * s;
    return total;
  }
};

DoubledRanks doubled_ranks(const ScoreMatrix& scores) {
  const auto ranks = rank_columns(scores);
  DoubledRanks d{ranks.n(), ranks.m(), std::vector<std::int64_t>(ranks.n() * ranks.m())};
  for (std::size_t j = 0; j < d.m; ++j)
    for (std::size_t i = 0; i < d.n; ++i) d.columns[j * d.n + i] = std::llround(2.0 * ranks(i, j));
  return d;
}

std::int64_t observed_statistic(const DoubledRanks& d) {
  std::vector<std::int64_t> sums(d.n, 0);
  for (std::size_t j = 0; j < d.m; ++j)
    for (std::size_t i = 0; i < d.n; ++i) sums[i] += d.columns[j * d.n + i];
  return d.statistic(sums);
}

// All n! orderings of each column, flattened: perms[j][p * n + i].
std::vector<std::vector<std::int64_t>> column_permutations(const DoubledRanks& d, std::uint64_t factorial) {
  std::vector<std::vector<std::int64_t>> perms(d.m);
  std::vector<std::size_t> idx(d.n);
  for (std::size_t j = 0; j < d.m; ++j) {
    perms[j].reserve(factorial * d.n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    do {
      for (std::size_t i = 0; i < d.n; ++i) perms[j].push_back(d.columns[j * d.n + idx[i]]);
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return perms;
}

bool exact_is_extreme(const DoubledRanks& d, const std::vector<std::vector<std::int64_t>>& perms,
                      std::uint64_t factorial, std::uint64_t index, std::int64_t observed,
                      std::vector<std::int64_t>& sums) {
  std::fill(sums.begin(), sums.end(), 0);
  for (std::size_t j = 0; j < d.m; ++j) {
    const std::uint64_t digit = index % factorial;
    index /= factorial;
    const std::int64_t* col = perms[j].data() + digit * d.n;
    for (std::size_t i = 0; i < d.n; ++i) sums[i] += col[i];
  }
  return d.statistic(sums) >= observed;
}

bool sampled_is_extreme(const DoubledRanks& d, std::uint64_t seed, std::uint64_t index, std::int64_t observed,
                        std::vector<std::int64_t>& sums, std::vector<std::int64_t>& column) {
  CounterRng rng(seed, index);
  std::fill(sums.begin(), sums.end(), 0);
  for (std::size_t j = 0; j < d.m; ++j) {
    std::copy_n(d.columns.begin() + static_cast<std::ptrdiff_t>(j * d.n), d.n, column.begin());
    for (std::size_t i = d.n - 1; i > 0; --i) std::swap(column[i], column[rng.below(i + 1)]);
    for (std::size_t i = 0; i < d.n; ++i) sums[i] += column[i];
  }
  return d.statistic(sums) >= observed;
}

}  // namespace

PermutationResult permutation_friedman(const ScoreMatrix& scores, PermutationMode mode, Execution exec) {
  const auto d = doubled_ranks(scores);
  if (d.m < 1) throw StatsError("permutation test needs at least 1 dataset");
  const std::int64_t observed = observed_statistic(d);
  const bool parallel = exec == Execution::parallel;
  (void)parallel;

  PermutationResult result;
  if (mode.kind == PermutationMode::Kind::exact) {
    std::uint64_t factorial = 1;
    for (std::size_t k = 2; k <= d.n; ++k) factorial *= k;
    const double total_d = std::pow(static_cast<double>(factorial), static_cast<double>(d.m));
    if (total_d > kMaxExactPermutations)
      throw StatsError("exact enumeration needs (n!)^m = " + std::to_string(total_d) +
                       " arrangements, above the 1e7 limit; use Monte-Carlo mode");
    const auto total = static_cast<std::uint64_t>(std::llround(total_d));
    const auto perms = column_permutations(d, factorial);

    std::uint64_t extreme = 0;
#pragma omp parallel if (parallel) reduction(+ : extreme)
    {
      std::vector<std::int64_t> sums(d.n);
#pragma omp for schedule(static)
      for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx)
        if (exact_is_extreme(d, perms, factorial, static_cast<std::uint64_t>(idx), observed, sums)) ++extreme;
    }
    result.extreme = extreme;
    result.total = total;
    result.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    return result;
  }

  if (mode.samples < 1) throw StatsError("Monte-Carlo permutation test needs at least 1 sample");
  std::uint64_t extreme = 0;
#pragma omp parallel if (parallel) reduction(+ : extreme)
  {
    std::vector<std::int64_t> sums(d.n);
    std::vector<std::int64_t> column(d.n);
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(mode.samples); ++s)
      if (sampled_is_extreme(d, mode.seed, static_cast<std::uint64_t>(s), observed, sums, column)) ++extreme;
  }
  // The observed arrangement counts as one extreme draw.
  result.extreme = extreme + 1;
  result.total = mode.samples + 1;
  result.p_value = static_cast<double>(result.extreme) / static_cast<double>(result.total);
  return result;
}

}  // namespace rigorbench
