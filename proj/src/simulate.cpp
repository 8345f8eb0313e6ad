#include "rigorbench/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "rigorbench/aggregate.hpp"
#include "rigorbench/error.hpp"
#include "rigorbench/stats.hpp"

namespace rigorbench {

double SimConfig::growth(int epoch) const {
  double g = tau > 0.0 ? 1.0 - std::exp(-static_cast<double>(epoch) / tau) : 1.0;
  for (int m : milestones)
    if (m >= epoch) g -= milestone_gain;
  return g;
}

SimConfig default_sim_config() {
  SimConfig c;
  c.algorithms = {"ERM", "Debiased", "DeepAug", "Geirhos", "InfoDrop", "SagNet", "pAdaIN"};
  c.datasets = {"Silhouette", "Edge", "Sketch", "CueConflict", "ImageNet1k", "ImageNetStylized"};
  c.mu = {
      46.6, 22.1, 56.5, 22.1, 73.4, 7.6,   //
      48.3, 29.4, 60.1, 29.1, 74.0, 15.6,  //
      51.1, 34.8, 63.1, 30.3, 73.0, 13.0,  //
      47.5, 59.2, 70.3, 53.7, 55.5, 52.5,  //
      46.6, 20.0, 57.3, 23.2, 72.9, 7.8,   //
      42.1, 19.9, 58.1, 21.1, 72.6, 6.1,   //
      45.5, 20.9, 56.0, 21.7, 73.1, 8.1,
  };
  c.validation_dataset = "ImageNet1k";
  return c;
}

void check_sim_config(const SimConfig& c) {
  if (c.algorithms.empty()) throw InputError("simulation config: no algorithms");
  if (c.datasets.empty()) throw InputError("simulation config: no datasets");
  if (std::set<std::string>(c.algorithms.begin(), c.algorithms.end()).size() != c.algorithms.size())
    throw InputError("simulation config: duplicate algorithm names");
  if (std::set<std::string>(c.datasets.begin(), c.datasets.end()).size() != c.datasets.size())
    throw InputError("simulation config: duplicate dataset names");
  if (c.mu.size() != c.algorithms.size() * c.datasets.size())
    throw InputError("simulation config: mu needs one value per algorithm and dataset");
  for (double v : c.mu)
    if (!std::isfinite(v)) throw InputError("simulation config: mu must be finite");
  if (c.epochs < 1) throw InputError("simulation config: epochs must be >= 1");
  if (c.runs < 1) throw InputError("simulation config: runs must be >= 1");
  if (!(c.tau >= 0.0)) throw InputError("simulation config: tau must be >= 0");
  if (!(c.sigma_intra >= 0.0) || !(c.sigma_inter >= 0.0))
    throw InputError("simulation config: sigma values must be >= 0");
  if (!std::isfinite(c.milestone_gain)) throw InputError("simulation config: milestone_gain must be finite");
  for (int m : c.milestones)
    if (m < 1 || m > c.epochs) throw InputError("simulation config: milestone " + std::to_string(m) + " outside [1, epochs]");
  if (std::find(c.datasets.begin(), c.datasets.end(), c.validation_dataset) == c.datasets.end())
    throw InputError("simulation config: validation_dataset \"" + c.validation_dataset + "\" is not a dataset");
  if (c.metric.empty()) throw InputError("simulation config: metric must be non-empty");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ", ";
    if constexpr (std::is_same_v<T, double>)
      out += format_double(v);
    else if constexpr (std::is_same_v<T, int>)
      out += std::to_string(v);
    else
      out += v;
  }
  return out;
}

}  // namespace

SimConfig parse_sim_config(std::istream& in) {
  SimConfig c = default_sim_config();
  std::map<std::string, std::vector<double>> rows;
  bool algorithms_set = false;
  bool datasets_set = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw InputError(where + "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "algorithms") {
        c.algorithms = split_list(value);
        algorithms_set = true;
      } else if (key == "datasets") {
        c.datasets = split_list(value);
        datasets_set = true;
      } else if (key.starts_with("mu.")) {
        std::vector<double> row;
        for (const auto& item : split_list(value)) row.push_back(parse_double(item, key));
        rows[key.substr(3)] = std::move(row);
      } else if (key == "epochs") {
        c.epochs = parse_int(value, key);
      } else if (key == "tau") {
        c.tau = parse_double(value, key);
      } else if (key == "milestones") {
        c.milestones.clear();
        for (const auto& item : split_list(value)) c.milestones.push_back(parse_int(item, key));
      } else if (key == "milestone_gain") {
        c.milestone_gain = parse_double(value, key);
      } else if (key == "sigma_intra") {
        c.sigma_intra = parse_double(value, key);
      } else if (key == "sigma_inter") {
        c.sigma_inter = parse_double(value, key);
      } else if (key == "runs") {
        c.runs = parse_int(value, key);
      } else if (key == "seed") {
        const long long seed = std::stoll(value);
        if (seed < 0) throw InputError("seed must be >= 0");
        c.seed = static_cast<std::uint64_t>(seed);
      } else if (key == "validation_dataset") {
        c.validation_dataset = value;
      } else if (key == "metric") {
        c.metric = value;
      } else {
        throw InputError("unknown key \"" + key + "\"");
      }
    } catch (const std::invalid_argument&) {
      throw InputError(where + "unparsable value for " + key);
    } catch (const std::out_of_range&) {
      throw InputError(where + "value out of range for " + key);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }

  const bool reshaped = algorithms_set || datasets_set;
  if (reshaped && rows.empty())
    throw InputError("simulation config: algorithms/datasets changed but no mu.<algorithm> rows given");
  if (!rows.empty()) {
    std::vector<double> mu;
    for (const auto& a : c.algorithms) {
      const auto it = rows.find(a);
      if (it == rows.end()) throw InputError("simulation config: missing mu." + a);
      if (it->second.size() != c.datasets.size())
        throw InputError("simulation config: mu." + a + " needs " + std::to_string(c.datasets.size()) + " values");
      mu.insert(mu.end(), it->second.begin(), it->second.end());
      rows.erase(it);
    }
    if (!rows.empty()) throw InputError("simulation config: mu." + rows.begin()->first + " names no algorithm");
    c.mu = std::move(mu);
  }
  if (datasets_set &&
      std::find(c.datasets.begin(), c.datasets.end(), c.validation_dataset) == c.datasets.end())
    c.validation_dataset = c.datasets.front();
  check_sim_config(c);
  return c;
}

void write_sim_config(const SimConfig& c, std::ostream& out) {
  out << "algorithms = " << join(c.algorithms) << '\n';
  out << "datasets = " << join(c.datasets) << '\n';
  for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
    std::vector<double> row(c.mu.begin() + static_cast<std::ptrdiff_t>(a * c.datasets.size()),
                            c.mu.begin() + static_cast<std::ptrdiff_t>((a + 1) * c.datasets.size()));
    out << "mu." << c.algorithms[a] << " = " << join(row) << '\n';
  }
  out << "epochs = " << c.epochs << '\n';
  out << "tau = " << format_double(c.tau) << '\n';
  out << "milestones = " << join(c.milestones) << '\n';
  out << "milestone_gain = " << format_double(c.milestone_gain) << '\n';
  out << "sigma_intra = " << format_double(c.sigma_intra) << '\n';
  out << "sigma_inter = " << format_double(c.sigma_inter) << '\n';
  out << "runs = " << c.runs << '\n';
  out << "seed = " << c.seed << '\n';
  out << "validation_dataset = " << c.validation_dataset << '\n';
  out << "metric = " << c.metric << '\n';
}

namespace {

// Fills the records of one (algorithm, run) pair into `out`, which has
// room for (datasets + 1) * epochs records. Every series draws from its own
// counter stream, so the result does not depend on scheduling.
void generate_run(const SimConfig& c, std::size_t algorithm, int run, const std::vector<double>& growth,
                  ScoreRecord* out) {
  const std::size_t m = c.datasets.size();
  const auto val_index = static_cast<std::size_t>(
      std::find(c.datasets.begin(), c.datasets.end(), c.validation_dataset) - c.datasets.begin());
  const auto pair_index = algorithm * static_cast<std::size_t>(c.runs) + static_cast<std::size_t>(run);
  for (std::size_t slot = 0; slot <= m; ++slot) {
    const bool is_val = slot == m;
    const std::size_t dataset = is_val ? val_index : slot;
    CounterRng rng(c.seed, pair_index * (m + 1) + slot);
    const double offset = c.sigma_inter * rng.normal();
    const double mu = c.level(algorithm, dataset);
    for (int e = 1; e <= c.epochs; ++e) {
      const double noise = c.sigma_intra * rng.normal();
      const double value = std::clamp(mu * growth[static_cast<std::size_t>(e)] + offset + noise, 0.0, 100.0);
      *out++ = ScoreRecord{c.algorithms[algorithm], run + 1,         e, c.datasets[dataset],
                           is_val ? Split::validation : Split::test, c.metric, value};
    }
  }
}

}  // namespace

RecordSet simulate(const SimConfig& c, Execution exec) {
  check_sim_config(c);
  const std::size_t n = c.algorithms.size();
  const std::size_t per_run = (c.datasets.size() + 1) * static_cast<std::size_t>(c.epochs);
  const auto pairs = static_cast<std::int64_t>(n * static_cast<std::size_t>(c.runs));
  std::vector<double> growth(static_cast<std::size_t>(c.epochs) + 1, 0.0);
  for (int e = 1; e <= c.epochs; ++e) growth[static_cast<std::size_t>(e)] = c.growth(e);

  std::vector<ScoreRecord> records(static_cast<std::size_t>(pairs) * per_run);
  const bool parallel = exec == Execution::parallel;
  (void)parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t p = 0; p < pairs; ++p) {
    const auto algorithm = static_cast<std::size_t>(p / c.runs);
    const auto run = static_cast<int>(p % c.runs);
    generate_run(c, algorithm, run, growth, records.data() + static_cast<std::size_t>(p) * per_run);
  }
  return RecordSet(std::move(records), c.epochs);
}

std::vector<GapRow> selection_gap_study(const SimConfig& c, Execution exec) {
  const auto records = simulate(c, exec);
  const std::size_t tail = std::min<std::size_t>(30, static_cast<std::size_t>(c.epochs));
  const auto best = aggregate_runs(apply_strategy(records, SelectionStrategy::best_epoch()));
  const auto last = aggregate_runs(apply_strategy(records, SelectionStrategy::last_n(1)));
  const auto last_n = aggregate_runs(apply_strategy(records, SelectionStrategy::last_n(tail)));
  const auto best_val = aggregate_runs(apply_strategy(records, SelectionStrategy::best_validation()));

  // All four share the canonical (algorithm, dataset) order of the cells.
  std::map<std::pair<std::string, std::string>, GapRow> rows;
  for (const auto& cell : best) rows[{cell.algorithm, cell.dataset}] = {cell.algorithm, cell.dataset, cell.mean};
  for (const auto& cell : last) rows.at({cell.algorithm, cell.dataset}).last_epoch = cell.mean;
  for (const auto& cell : last_n) rows.at({cell.algorithm, cell.dataset}).last_n = cell.mean;
  for (const auto& cell : best_val) rows.at({cell.algorithm, cell.dataset}).best_validation = cell.mean;

  std::vector<GapRow> out;
  for (const auto& a : c.algorithms)
    for (const auto& d : c.datasets) out.push_back(rows.at({a, d}));
  return out;
}

double friedman_rejection_rate(const SimConfig& c, const SelectionStrategy& strategy, int trials, double alpha,
                               Execution exec) {
  check_sim_config(c);
  if (trials < 1) throw InputError("rejection-rate study needs at least one trial");
  // Nothing may throw inside the parallel region; check the preconditions here.
  if (c.algorithms.size() < 2 || c.datasets.size() < 2)
    throw StatsError("rejection-rate study needs at least 2 algorithms and 2 datasets");
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError("alpha must lie in (0, 1)");
  if (strategy.kind == SelectionStrategy::Kind::last_n &&
      (strategy.n < 1 || strategy.n > static_cast<std::size_t>(c.epochs)))
    throw InputError("last-n selection needs 1 <= n <= epochs");
  std::int64_t rejected = 0;
  const bool parallel = exec == Execution::parallel;
  (void)parallel;
#pragma omp parallel for schedule(dynamic) reduction(+ : rejected) if (parallel)
  for (std::int64_t t = 0; t < trials; ++t) {
    SimConfig trial = c;
    trial.seed = mix64(c.seed ^ (static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL));
    const auto cells = aggregate_runs(apply_strategy(simulate(trial, Execution::serial), strategy));
    const auto matrix = build_score_matrix(cells, c.algorithms, c.datasets);
    if (friedman_test(matrix, alpha).reject) ++rejected;
  }
  return static_cast<double>(rejected) / static_cast<double>(trials);
}

}  // namespace rigorbench
