#include "rigorbench/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "rigorbench/error.hpp"

namespace rigorbench {

ScoreMatrix::ScoreMatrix(std::vector<std::string> algorithms, std::vector<std::string> datasets,
                         std::vector<double> values, bool higher_is_better)
    : algorithms_(std::move(algorithms)),
      datasets_(std::move(datasets)),
      values_(std::move(values)),
      higher_is_better_(higher_is_better) {
  if (values_.size() != algorithms_.size() * datasets_.size())
    throw InputError("score matrix shape mismatch: " + std::to_string(values_.size()) + " values for " +
                     std::to_string(algorithms_.size()) + "x" + std::to_string(datasets_.size()));
}

Moments sample_moments(std::span<const double> values) {
  if (values.empty()) throw InputError("moments of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<CellStats> aggregate_runs(const SelectedScores& selected) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> pooled;
  for (const auto& [key, samples] : selected.entries) {
    if (samples.empty())
      throw InputError("empty selection for " + key.algorithm + " run " + std::to_string(key.run) + " " +
                       key.dataset);
    auto& bucket = pooled[{key.algorithm, key.dataset}];
    bucket.insert(bucket.end(), samples.begin(), samples.end());
  }
  std::vector<CellStats> out;
  out.reserve(pooled.size());
  for (const auto& [key, samples] : pooled) {
    const auto m = sample_moments(samples);
    out.push_back({key.first, key.second, m.mean, m.stddev, static_cast<int>(samples.size())});
  }
  return out;
}

PooledCell pooled_from_summaries(std::span<const SummaryRecord> summaries) {
  if (summaries.empty()) throw InputError("pooling an empty cell");
  const auto& first = summaries.front();
  double weighted = 0.0;
  long long total = 0;
  for (const auto& s : summaries) {
    if (s.algorithm != first.algorithm || s.dataset != first.dataset)
      throw InputError("pooling mixed cells (" + first.algorithm + "/" + first.dataset + " with " + s.algorithm +
                       "/" + s.dataset + ")");
    if (s.count < 1) throw InputError("summary count must be >= 1");
    if (s.stddev < 0.0) throw InputError("summary std must be >= 0");
    weighted += static_cast<double>(s.count) * s.mean;
    total += s.count;
  }
  const double mean = weighted / static_cast<double>(total);
  PooledCell out{{first.algorithm, first.dataset, mean, 0.0, static_cast<int>(total)}, total < 2};
  if (total < 2) return out;
  double ss = 0.0;
  for (const auto& s : summaries) {
    const double c = static_cast<double>(s.count);
    ss += (c - 1.0) * s.stddev * s.stddev + c * (s.mean - mean) * (s.mean - mean);
  }
  out.stats.stddev = std::sqrt(ss / static_cast<double>(total - 1));
  return out;
}

std::vector<CellStats> cells_from_summaries(const std::vector<SummaryRecord>& summaries, bool pool) {
  std::map<std::pair<std::string, std::string>, std::vector<SummaryRecord>> groups;
  for (const auto& s : summaries) groups[{s.algorithm, s.dataset}].push_back(s);
  std::vector<CellStats> out;
  out.reserve(groups.size());
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) { return a.run < b.run; });
    if (pool) {
      out.push_back(pooled_from_summaries(group).stats);
      continue;
    }
    std::vector<double> means;
    means.reserve(group.size());
    for (const auto& s : group) means.push_back(s.mean);
    const auto m = sample_moments(means);
    out.push_back({key.first, key.second, m.mean, m.stddev, static_cast<int>(means.size())});
  }
  return out;
}

ScoreMatrix build_score_matrix(const std::vector<CellStats>& cells, std::vector<std::string> algorithm_order,
                               std::vector<std::string> dataset_order, bool higher_is_better) {
  std::map<std::pair<std::string, std::string>, double> lookup;
  std::set<std::string> algs;
  std::set<std::string> dsets;
  for (const auto& c : cells) {
    if (!lookup.emplace(std::pair{c.algorithm, c.dataset}, c.mean).second)
      throw InputError("duplicate cell " + c.algorithm + "/" + c.dataset);
    algs.insert(c.algorithm);
    dsets.insert(c.dataset);
  }
  if (algorithm_order.empty()) algorithm_order.assign(algs.begin(), algs.end());
  if (dataset_order.empty()) dataset_order.assign(dsets.begin(), dsets.end());
  for (const auto& a : algs)
    if (std::find(algorithm_order.begin(), algorithm_order.end(), a) == algorithm_order.end())
      throw InputError("algorithm \"" + a + "\" is not in the requested order");
  for (const auto& d : dsets)
    if (std::find(dataset_order.begin(), dataset_order.end(), d) == dataset_order.end())
      throw InputError("dataset \"" + d + "\" is not in the requested order");

  std::vector<double> values;
  values.reserve(algorithm_order.size() * dataset_order.size());
  std::string missing;
  for (const auto& a : algorithm_order) {
    for (const auto& d : dataset_order) {
      const auto it = lookup.find({a, d});
      if (it == lookup.end()) {
        missing += (missing.empty() ? "" : ", ") + ("(" + a + ", " + d + ")");
        values.push_back(0.0);
      } else {
        values.push_back(it->second);
      }
    }
  }
  if (!missing.empty()) throw InputError("score matrix is missing cells: " + missing);
  return ScoreMatrix(std::move(algorithm_order), std::move(dataset_order), std::move(values), higher_is_better);
}

void write_cells_csv(const std::vector<CellStats>& cells, std::ostream& out) {
  out << "algorithm,dataset,mean,std,count\n";
  for (const auto& c : cells)
    out << c.algorithm << ',' << c.dataset << ',' << format_double(c.mean) << ',' << format_double(c.stddev) << ','
        << c.count << '\n';
}

std::vector<CellStats> parse_cells_csv(std::istream& in) {
  std::string line;
  std::vector<CellStats> cells;
  if (!std::getline(in, line)) return cells;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "algorithm,dataset,mean,std,count")
    throw InputError("line 1: header must be \"algorithm,dataset,mean,std,count\"");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (auto pos = rest.find(','); pos != std::string_view::npos; pos = rest.find(',')) {
      cols.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cols.push_back(rest);
    try {
      if (cols.size() != 5) throw InputError("expected 5 columns");
      CellStats c{std::string(cols[0]), std::string(cols[1]), parse_double(cols[2], "mean"),
                  parse_double(cols[3], "std"), parse_int(cols[4], "count")};
      if (c.stddev < 0.0 || c.count < 1) throw InputError("std must be >= 0 and count >= 1");
      cells.push_back(std::move(c));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cells;
}

}  // namespace rigorbench
