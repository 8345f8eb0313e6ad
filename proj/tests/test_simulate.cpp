#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "rigorbench/aggregate.hpp"
#include "rigorbench/error.hpp"
#include "rigorbench/simulate.hpp"

using namespace rigorbench;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.algorithms = {"ERM", "SagNet", "pAdaIN"};
  c.datasets = {"Silhouette", "Edge", "ImageNet1k"};
  c.mu = {47, 22, 73, 42, 20, 72, 45, 21, 73};
  c.epochs = 60;
  c.milestones = {30};
  c.runs = 4;
  c.validation_dataset = "ImageNet1k";
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("noiseless configuration reproduces mu exactly") {
  auto c = small_config();
  c.sigma_intra = 0;
  c.sigma_inter = 0;
  c.tau = 0;
  c.milestones = {};
  const auto set = simulate(c);
  CHECK(set.size() == 3 * 4 * 60 * 4);
  for (const auto& r : set.records()) {
    const std::size_t a = std::find(c.algorithms.begin(), c.algorithms.end(), r.algorithm) - c.algorithms.begin();
    const std::size_t d = std::find(c.datasets.begin(), c.datasets.end(), r.dataset) - c.datasets.begin();
    CHECK(r.value == c.level(a, d));
  }
}

TEST_CASE("simulate is deterministic and schedule independent") {
  const auto c = small_config();
  const auto a = simulate(c, Execution::serial);
  const auto b = simulate(c, Execution::parallel);
  CHECK(a == b);
  std::ostringstream ja;
  std::ostringstream jb;
  write_jsonl(a, ja);
  write_jsonl(simulate(c), jb);
  CHECK(ja.str() == jb.str());

  auto other = c;
  other.seed = 6;
  CHECK_FALSE(simulate(other) == a);
}

TEST_CASE("simulated logs pass validation") {
  const auto set = simulate(small_config());
  CHECK(set.declared_epochs() == 60);
  const auto report = validate(set, {true, 60});
  CHECK(report.ok());
  CHECK(report.warning_count() == 0);
}

TEST_CASE("growth curve") {
  SimConfig c = small_config();
  c.tau = 5;
  c.milestones = {30, 60, 90};
  c.milestone_gain = 0.02;
  CHECK(c.growth(1) == doctest::Approx(1 - std::exp(-0.2) - 0.06));
  CHECK(c.growth(31) == doctest::Approx(1 - std::exp(-31.0 / 5) - 0.04));
  CHECK(c.growth(100) == doctest::Approx(1 - std::exp(-20.0)));
  c.tau = 0;
  c.milestones = {};
  CHECK(c.growth(1) == 1.0);
}

TEST_CASE("late-epoch spread across runs follows the variance decomposition") {
  SimConfig c = small_config();
  c.epochs = 100;
  c.runs = 10;
  c.sigma_intra = 2.0;
  c.sigma_inter = 1.5;
  const auto set = simulate(c);
  const double target = std::sqrt(2.0 * 2.0 + 1.5 * 1.5);
  std::map<std::tuple<std::string, std::string, int>, std::vector<double>> by_epoch;
  for (const auto& r : set.records())
    if (r.split == Split::test && r.epoch > 90) by_epoch[{r.algorithm, r.dataset, r.epoch}].push_back(r.value);
  double sum_var = 0;
  for (const auto& [key, values] : by_epoch) {
    const auto m = sample_moments(values);
    sum_var += m.stddev * m.stddev;
  }
  const double pooled = std::sqrt(sum_var / by_epoch.size());
  CHECK(pooled == doctest::Approx(target).epsilon(0.2));
}

TEST_CASE("config text round-trip and checks") {
  const auto c = default_sim_config();
  CHECK(c.algorithms.size() == 7);
  CHECK(c.datasets.size() == 6);
  std::ostringstream out;
  write_sim_config(c, out);
  std::istringstream in(out.str());
  const auto back = parse_sim_config(in);
  CHECK(back.algorithms == c.algorithms);
  CHECK(back.datasets == c.datasets);
  CHECK(back.mu == c.mu);
  CHECK(back.milestones == c.milestones);
  CHECK(back.sigma_intra == c.sigma_intra);
  CHECK(back.seed == c.seed);
  CHECK(back.validation_dataset == c.validation_dataset);

  std::istringstream bad("epochs = 0\n");
  CHECK_THROWS_AS(parse_sim_config(bad), InputError);
  std::istringstream unknown("algorithms = A\ndatasets = D\nmu.A = 1\ncolour = red\n");
  CHECK_THROWS_AS(parse_sim_config(unknown), InputError);

  auto broken = small_config();
  broken.milestones = {70};
  CHECK_THROWS_AS(check_sim_config(broken), InputError);
  broken = small_config();
  broken.sigma_intra = -1;
  CHECK_THROWS_AS(check_sim_config(broken), InputError);
}

TEST_CASE("selection gap") {
  auto c = small_config();
  c.sigma_intra = 0;
  c.sigma_inter = 0.5;
  c.milestones = {};
  c.tau = 0;
  for (const auto& row : selection_gap_study(c)) CHECK(row.gap() == 0.0);

  c.sigma_intra = 2.0;
  c.runs = 20;
  for (const auto& row : selection_gap_study(c)) {
    CHECK(row.gap() < 0.0);
    CHECK(row.best_epoch >= row.best_validation);
  }
}

TEST_CASE("rejection rate: serial and parallel agree, separated levels always reject") {
  auto c = small_config();
  c.epochs = 8;
  c.runs = 2;
  c.milestones = {};
  const double serial = friedman_rejection_rate(c, SelectionStrategy::last_n(3), 40, 0.05, Execution::serial);
  const double parallel = friedman_rejection_rate(c, SelectionStrategy::last_n(3), 40, 0.05, Execution::parallel);
  CHECK(serial == parallel);

  auto far = c;
  far.algorithms = {"a", "b", "c", "d"};
  far.datasets = {"w", "x", "y", "z", "v"};
  far.validation_dataset = "w";
  far.mu.clear();
  for (int a = 0; a < 4; ++a)
    for (int d = 0; d < 5; ++d) far.mu.push_back(20.0 + 15.0 * a);
  CHECK(friedman_rejection_rate(far, SelectionStrategy::best_epoch(), 20, 0.05) == 1.0);

  CHECK_THROWS_AS(friedman_rejection_rate(c, SelectionStrategy::last_n(50), 5, 0.05), InputError);
}
