#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rigorbench/parallel.hpp"
#include "rigorbench/scorelog.hpp"
#include "rigorbench/selection.hpp"

namespace rigorbench {

/// Generative model of per-epoch score trajectories:
///
///   score(a, d, r, e) = mu[a][d] * g(e) + b(a, r, d) + eps(a, r, d, e)
///   g(e) = (1 - exp(-e / tau)) - milestone_gain * #{milestones >= e}
///
/// b is drawn once per run and dataset from N(0, sigma_inter^2) and stays
/// fixed over epochs; eps is i.i.d. N(0, sigma_intra^2). Scores are clamped
/// to [0, 100]. Each run also gets a validation series on
/// `validation_dataset` with independent draws. tau = 0 disables the ramp.
struct SimConfig {
  std::vector<std::string> algorithms;
  std::vector<std::string> datasets;
  std::vector<double> mu;  // algorithms x datasets, row-major, percent
  int epochs = 100;
  double tau = 5.0;
  std::vector<int> milestones = {30, 60, 90};
  double milestone_gain = 0.02;
  double sigma_intra = 2.0;
  double sigma_inter = 1.5;
  int runs = 10;
  std::uint64_t seed = 1;
  std::string validation_dataset;
  std::string metric = "top1_acc";

  double level(std::size_t algorithm, std::size_t dataset) const { return mu[algorithm * datasets.size() + dataset]; }
  // Mean trajectory multiplier g(e).
  double growth(int epoch) const;
};

// Seven algorithms, six datasets, levels taken from the reference
// last-30-epoch means.
SimConfig default_sim_config();

// Throws InputError on an invalid configuration.
void check_sim_config(const SimConfig& config);

// Flat "key = value" text; '#' starts a comment. Keys: algorithms,
// datasets, mu.<algorithm>, epochs, tau, milestones, milestone_gain,
// sigma_intra, sigma_inter, runs, seed, validation_dataset, metric.
// Missing keys keep their defaults.
SimConfig parse_sim_config(std::istream& in);
void write_sim_config(const SimConfig& config, std::ostream& out);

// Deterministic given the seed, identical for both execution paths.
RecordSet simulate(const SimConfig& config, Execution exec = Execution::parallel);

struct GapRow {
  std::string algorithm;
  std::string dataset;
  double best_epoch = 0.0;
  double last_epoch = 0.0;
  double last_n = 0.0;
  double best_validation = 0.0;

  // last - best; negative when picking the final epoch loses to the oracle.
  double gap() const { return last_epoch - best_epoch; }
};

// Simulates, applies every selection strategy, and reports mean scores per
// (algorithm, dataset). last_n uses min(30, epochs).
std::vector<GapRow> selection_gap_study(const SimConfig& config, Execution exec = Execution::parallel);

// Runs `trials` independent simulations (seed varied per trial) through
// selection, aggregation and the Friedman test; returns the rejection rate.
double friedman_rejection_rate(const SimConfig& config, const SelectionStrategy& strategy, int trials,
                               double alpha, Execution exec = Execution::parallel);

}  // namespace rigorbench
