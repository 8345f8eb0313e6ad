#include "rigorbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "rigorbench/error.hpp"
#include "rigorbench/specfun.hpp"

namespace rigorbench {

RankMatrix rank_columns(const ScoreMatrix& scores) {
  const std::size_t n = scores.rows();
  const std::size_t m = scores.cols();
  if (n < 2) throw StatsError("ranking needs at least 2 algorithms, got " + std::to_string(n));
  for (double v : scores.values())
    if (std::isnan(v)) throw InputError("score matrix contains NaN");

  RankMatrix out;
  out.algorithms = scores.algorithms();
  out.datasets = m;
  out.ranks.assign(n * m, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < m; ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto better = [&](std::size_t a, std::size_t b) {
      return scores.higher_is_better() ? scores(a, j) > scores(b, j) : scores(a, j) < scores(b, j);
    };
    std::stable_sort(order.begin(), order.end(), better);
    for (std::size_t start = 0; start < n;) {
      std::size_t end = start + 1;
      while (end < n && scores(order[end], j) == scores(order[start], j)) ++end;
      // Positions start+1 .. end share their mean.
      const double shared = 0.5 * static_cast<double>(start + 1 + end);
      for (std::size_t k = start; k < end; ++k) out.ranks[order[k] * m + j] = shared;
      start = end;
    }
  }
  out.average_ranks.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum += out.ranks[i * m + j];
    out.average_ranks[i] = m == 0 ? 0.0 : sum / static_cast<double>(m);
  }
  return out;
}

double friedman_chi2(const RankMatrix& ranks) {
  const std::size_t n = ranks.n();
  const std::size_t m = ranks.m();
  if (n < 2 || m < 1) throw StatsError("Friedman statistic needs n >= 2 and m >= 1");
  // Written in rank sums S_i = m R_i. Ranks are multiples of 1/2, so the
  // sum of squares is exact and a fully tied matrix gives exactly 0.
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += ranks(i, j);
    sum_sq += s * s;
  }
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double chi2 = 12.0 * sum_sq / (md * nd * (nd + 1.0)) - 3.0 * md * (nd + 1.0);
  return std::max(chi2, 0.0);
}

ImanDavenport iman_davenport(double chi2, std::size_t n, std::size_t m) {
  if (n < 2 || m < 1) throw StatsError("Iman-Davenport needs n >= 2 and m >= 1");
  const double max_chi2 = static_cast<double>(m) * static_cast<double>(n - 1);
  const double tol = 1e-12 * max_chi2;
  if (!(chi2 >= -tol) || chi2 > max_chi2 + tol)
    throw StatsError("chi2 = " + std::to_string(chi2) + " outside [0, " + std::to_string(max_chi2) + "]");
  if (max_chi2 - chi2 <= tol) return {std::numeric_limits<double>::infinity(), true};
  return {(static_cast<double>(m) - 1.0) * chi2 / (max_chi2 - chi2), false};
}

FriedmanResult friedman_test(const ScoreMatrix& scores, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError("alpha must lie in (0, 1)");
  const std::size_t n = scores.rows();
  const std::size_t m = scores.cols();
  if (n < 2) throw StatsError("Friedman test needs at least 2 algorithms, got " + std::to_string(n));
  if (m < 2) throw StatsError("Friedman test needs at least 2 datasets, got " + std::to_string(m));

  const auto ranks = rank_columns(scores);
  FriedmanResult r;
  r.alpha = alpha;
  r.chi2 = friedman_chi2(ranks);
  r.df1 = static_cast<int>(n - 1);
  r.df2 = static_cast<int>((m - 1) * (n - 1));
  r.chi2_p_value = chi2_sf(r.chi2, r.df1);
  const auto id = iman_davenport(r.chi2, n, m);
  r.ff = id.ff;
  r.degenerate = id.degenerate;
  r.p_value = id.degenerate ? 0.0 : f_sf(id.ff, r.df1, r.df2);
  r.reject = r.degenerate || r.p_value < alpha;
  return r;
}

NemenyiMatrix nemenyi_test(const RankMatrix& ranks, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError("alpha must lie in (0, 1)");
  const std::size_t n = ranks.n();
  const std::size_t m = ranks.m();
  if (n < 2) throw StatsError("Nemenyi test needs at least 2 algorithms");
  if (m < 1) throw StatsError("Nemenyi test needs at least 1 dataset");
  const double nd = static_cast<double>(n);
  const double se = std::sqrt(nd * (nd + 1.0) / (6.0 * static_cast<double>(m)));

  NemenyiMatrix out;
  out.algorithms = ranks.algorithms;
  out.alpha = alpha;
  out.pairs.assign(n * n, PairComparison{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      PairComparison c;
      c.rank_diff = std::fabs(ranks.average_ranks[i] - ranks.average_ranks[j]);
      c.standard_error = se;
      c.q = c.rank_diff / se;
      c.p_value = srange_sf(c.q * std::numbers::sqrt2, static_cast<int>(n));
      c.significant = c.p_value < alpha;
      out.pairs[i * n + j] = c;
      out.pairs[j * n + i] = c;
    }
  }
  return out;
}

}  // namespace rigorbench
