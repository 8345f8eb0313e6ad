#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rigorbench/report.hpp"
#include "rigorbench/scorelog.hpp"
#include "rigorbench/selection.hpp"

namespace rigorbench {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitStats = 2;

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  SelectionStrategy strategy = SelectionStrategy::best_validation();
  double alpha = 0.05;
  ReportFormat::Kind format = ReportFormat::Kind::markdown;
  std::optional<std::filesystem::path> out_dir;
  std::uint64_t seed = 0;
  std::uint64_t permutations = 0;  // Monte-Carlo permutation oracle samples; 0 = off
  bool force_posthoc = false;
  bool summary_input = false;
  std::vector<std::string> algorithm_order;
  std::vector<std::string> dataset_order;
};

// Score logs or pre-summarized per-run rows, depending on the input files.
using LoadedInput = std::variant<RecordSet, std::vector<SummaryRecord>>;

// .jsonl/.json files are JSONL; .csv files are told apart by their header.
// `force_summary` requires summary CSVs.
LoadedInput load_inputs(const std::vector<std::filesystem::path>& paths, bool force_summary);

int cmd_validate(const std::vector<std::filesystem::path>& paths, const ValidationRequirements& req,
                 std::ostream& out, std::ostream& err);
int cmd_evaluate(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const std::optional<std::filesystem::path>& config_path,
                 const std::optional<std::filesystem::path>& out_path, std::optional<std::uint64_t> seed,
                 std::ostream& out, std::ostream& err);

// Full command line, args[0] being the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rigorbench
