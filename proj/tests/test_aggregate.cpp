#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "rigorbench/aggregate.hpp"
#include "rigorbench/error.hpp"

using namespace rigorbench;

namespace {

std::vector<SummaryRecord> fixture(const char* name) {
  std::ifstream in(std::string(RIGORBENCH_FIXTURES) + "/" + name);
  REQUIRE(in);
  return parse_summary_csv(in);
}

}  // namespace

TEST_CASE("aggregate_runs on scalar selections") {
  SelectedScores sel{SelectionStrategy::best_validation(), {}};
  const double runs[] = {74.0, 73.7, 73.7, 73.8, 73.7, 73.7, 73.9, 73.7, 74.0, 73.8};
  for (int r = 0; r < 10; ++r) sel.entries[{"ERM", r + 1, "ImageNet1k"}] = {runs[r]};
  const auto cells = aggregate_runs(sel);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].mean == doctest::Approx(73.8).epsilon(1e-12));
  CHECK(std::round(cells[0].stddev * 10) / 10 == doctest::Approx(0.1));
  CHECK(cells[0].count == 10);

  SelectedScores one{SelectionStrategy::best_epoch(), {{{"X", 1, "D"}, {50.0}}}};
  const auto single = aggregate_runs(one);
  CHECK(single[0].mean == 50.0);
  CHECK(single[0].stddev == 0.0);
}

TEST_CASE("aggregate_runs pools last-n samples across runs") {
  SelectedScores sel{SelectionStrategy::last_n(3), {}};
  sel.entries[{"A", 1, "D"}] = {1, 2, 3};
  sel.entries[{"A", 2, "D"}] = {4, 5, 6};
  const auto cells = aggregate_runs(sel);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].count == 6);
  CHECK(cells[0].mean == doctest::Approx(3.5));
  CHECK(cells[0].stddev == doctest::Approx(std::sqrt(17.5 / 5.0)));
}

TEST_CASE("pooled_from_summaries") {
  const std::vector<SummaryRecord> two{{"A", 1, "D", 10, 0, 1}, {"A", 2, "D", 20, 0, 1}};
  const auto pooled = pooled_from_summaries(two);
  CHECK(pooled.stats.mean == 15.0);
  CHECK(pooled.stats.stddev == doctest::Approx(7.0710678118654755));

  const std::vector<SummaryRecord> one{{"A", 1, "D", 46.6, 1.5, 30}};
  const auto identity = pooled_from_summaries(one);
  CHECK(identity.stats.mean == doctest::Approx(46.6));
  CHECK(identity.stats.stddev == doctest::Approx(1.5));

  const std::vector<SummaryRecord> lone{{"A", 1, "D", 46.6, 0, 1}};
  CHECK(pooled_from_summaries(lone).stddev_undefined);

  const std::vector<SummaryRecord> mixed{{"A", 1, "D", 1, 0, 1}, {"B", 1, "D", 2, 0, 1}};
  CHECK_THROWS_AS(pooled_from_summaries(mixed), InputError);
}

TEST_CASE("pooling matches a flat recomputation over reconstructed samples") {
  // Each summary is realised by an explicit sample with that mean and std;
  // pooling the summaries must agree with the moments of the union.
  std::vector<SummaryRecord> rows;
  std::vector<double> all;
  const double centers[] = {3.0, 5.5, -1.0};
  const int counts[] = {4, 7, 2};
  for (int r = 0; r < 3; ++r) {
    std::vector<double> sample;
    for (int k = 0; k < counts[r]; ++k) sample.push_back(centers[r] + 0.3 * k * k - 0.1 * k);
    const auto m = sample_moments(sample);
    rows.push_back({"A", r + 1, "D", m.mean, m.stddev, counts[r]});
    all.insert(all.end(), sample.begin(), sample.end());
  }
  const auto flat = sample_moments(all);
  const auto pooled = pooled_from_summaries(rows);
  CHECK(pooled.stats.mean == doctest::Approx(flat.mean).epsilon(1e-12));
  CHECK(pooled.stats.stddev == doctest::Approx(flat.stddev).epsilon(1e-12));
  CHECK(pooled.stats.count == 13);
}

TEST_CASE("ERM Silhouette last-30 pooled from the last-30 summary fixture") {
  std::vector<SummaryRecord> erm;
  for (const auto& r : fixture("appendix_last30_summary.csv"))
    if (r.algorithm == "ERM" && r.dataset == "Silhouette") erm.push_back(r);
  REQUIRE(erm.size() == 10);
  const auto pooled = pooled_from_summaries(erm);
  CHECK(pooled.stats.mean == doctest::Approx(46.6).epsilon(0.001));
  CHECK(pooled.stats.stddev >= 2.1);
  CHECK(pooled.stats.stddev <= 2.4);
}

TEST_CASE("build_score_matrix") {
  const std::vector<CellStats> cells{{"A", "D", 1, 0, 1}, {"B", "D", 2, 0, 1}};
  const auto minimal = build_score_matrix(cells, {}, {});
  CHECK(minimal.rows() == 2);
  CHECK(minimal.cols() == 1);
  CHECK(minimal(1, 0) == 2);

  const auto reordered = build_score_matrix(cells, {"B", "A"}, {"D"});
  CHECK(reordered(0, 0) == 2);

  std::vector<CellStats> grid;
  for (const char* a : {"ERM", "SagNet"})
    for (const char* d : {"Silhouette", "Edge"})
      if (!(std::string(a) == "SagNet" && std::string(d) == "Edge")) grid.push_back({a, d, 1, 0, 1});
  try {
    build_score_matrix(grid, {}, {});
    FAIL("expected a missing-cell error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("(SagNet, Edge)") != std::string::npos);
  }
}

TEST_CASE("cells.csv round-trip") {
  const std::vector<CellStats> cells{{"ERM", "Edge", 21.95, 4.6012345678901234, 10}, {"X", "Y", 0.1 + 0.2, 0, 1}};
  std::ostringstream out;
  write_cells_csv(cells, out);
  std::istringstream in(out.str());
  CHECK(parse_cells_csv(in) == cells);
}
