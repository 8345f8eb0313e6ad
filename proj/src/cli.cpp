#include "rigorbench/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rigorbench/aggregate.hpp"
#include "rigorbench/error.hpp"
#include "rigorbench/parallel.hpp"
#include "rigorbench/simulate.hpp"
#include "rigorbench/stats.hpp"

namespace rigorbench {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSummaryHeader = "algorithm,run,dataset,mean,std,count";

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

bool has_summary_header(const fs::path& path) {
  auto in = open_input(path);
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  return header == kSummaryHeader;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("failed writing " + path.string());
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const StatsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitStats;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace

LoadedInput load_inputs(const std::vector<fs::path>& paths, bool force_summary) {
  if (paths.empty()) throw InputError("no input files");
  std::optional<RecordSet> records;
  std::optional<std::vector<SummaryRecord>> summaries;
  for (const auto& path : paths) {
    const auto ext = path.extension().string();
    const bool jsonl = ext == ".jsonl" || ext == ".json";
    const bool summary = !jsonl && (force_summary || has_summary_header(path));
    if (force_summary && jsonl) throw InputError(path.string() + ": --summary expects summary CSV files");
    auto in = open_input(path);
    try {
      if (summary) {
        auto rows = parse_summary_csv(in);
        if (!summaries) summaries.emplace();
        summaries->insert(summaries->end(), rows.begin(), rows.end());
      } else {
        auto set = jsonl ? parse_jsonl(in) : parse_csv(in);
        records = records ? RecordSet::merge(*records, set) : std::move(set);
      }
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }
  if (records && summaries) throw InputError("cannot mix score logs and summary files in one evaluation");
  if (summaries) {
    // Re-parse the merged rows so duplicates across files are caught too.
    std::ostringstream buffer;
    write_summary_csv(*summaries, buffer);
    std::istringstream again(buffer.str());
    return parse_summary_csv(again);
  }
  return std::move(*records);
}

int cmd_validate(const std::vector<fs::path>& paths, const ValidationRequirements& req, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const auto input = load_inputs(paths, false);
    if (const auto* summaries = std::get_if<std::vector<SummaryRecord>>(&input)) {
      out << "summary input: " << summaries->size() << " rows\nok (0 errors, 0 warnings)\n";
      return kExitOk;
    }
    const auto report = validate(std::get<RecordSet>(input), req);
    out << report.to_text();
    return report.ok() ? kExitOk : kExitInput;
  });
}

namespace {

std::vector<CellStats> cells_for(const LoadedInput& input, const PipelineConfig& config, std::ostream& err) {
  const bool last_n = config.strategy.kind == SelectionStrategy::Kind::last_n;
  if (const auto* summaries = std::get_if<std::vector<SummaryRecord>>(&input)) {
    for (const auto& s : *summaries) {
      const std::string where = s.algorithm + " run " + std::to_string(s.run) + " " + s.dataset;
      if (last_n && s.count != static_cast<int>(config.strategy.n))
        throw InputError(where + ": summary covers " + std::to_string(s.count) + " epochs but --n is " +
                         std::to_string(config.strategy.n));
      if (!last_n && s.count != 1)
        throw InputError(where + ": " + to_string(config.strategy) +
                         " expects one selected score per run (count 1), got count " + std::to_string(s.count));
    }
    return cells_from_summaries(*summaries, last_n);
  }
  const auto& records = std::get<RecordSet>(input);
  ValidationRequirements req;
  req.need_validation_split = config.strategy.kind == SelectionStrategy::Kind::best_validation;
  const auto report = validate(records, req);
  for (const auto& f : report.findings)
    err << (f.severity == Severity::error ? "error: " : "warning: ") << f.location << ": " << f.message << '\n';
  if (!report.ok()) throw InputError("input failed validation (" + std::to_string(report.error_count()) + " errors)");
  return aggregate_runs(apply_strategy(records, config.strategy));
}

}  // namespace

int cmd_evaluate(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw InputError("--alpha must lie in (0, 1)");
    const auto input = load_inputs(config.inputs, config.summary_input);
    const auto cells = cells_for(input, config, err);
    const auto matrix = build_score_matrix(cells, config.algorithm_order, config.dataset_order);
    if (matrix.rows() < 2) throw StatsError("need at least 2 algorithms to compare, got " + std::to_string(matrix.rows()));

    const ReportFormat format{config.format, config.alpha};
    const auto friedman = friedman_test(matrix, config.alpha);
    const bool posthoc = friedman.reject || config.force_posthoc;

    const std::string results = render_results_table(cells, matrix.algorithms(), matrix.datasets(), format);
    std::string summary = render_friedman_summary(friedman, format);
    if (config.permutations > 0) {
      const auto perm = permutation_friedman(matrix, PermutationMode::monte_carlo(config.permutations, config.seed));
      std::ostringstream line;
      if (config.format == ReportFormat::Kind::csv)
        line << "permutation_p_value," << format_double(perm.p_value) << '\n';
      else
        line << (config.format == ReportFormat::Kind::markdown ? "- " : "") << "permutation p = "
             << format_double(perm.p_value) << " (" << config.permutations << " Monte-Carlo samples, seed "
             << config.seed << ")\n";
      summary += line.str();
    }
    std::string nemenyi_text;
    if (posthoc) nemenyi_text = render_nemenyi_table(nemenyi_test(rank_columns(matrix), config.alpha), format);
    const std::string skipped = "post-hoc skipped: the omnibus test did not reject H0 (use --force-posthoc to run it)\n";

    if (config.out_dir) {
      const auto& dir = *config.out_dir;
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
      const auto ext = "." + file_extension(config.format);
      std::ostringstream cells_csv;
      write_cells_csv(cells, cells_csv);
      write_file(dir / "cells.csv", cells_csv.str());
      write_file(dir / ("results" + ext), results);
      write_file(dir / ("friedman" + ext), summary);
      if (posthoc) write_file(dir / ("nemenyi" + ext), nemenyi_text);
      out << "strategy: " << to_string(config.strategy) << "\n" << render_friedman_summary(friedman, {});
      out << (posthoc ? "post-hoc: " + (dir / ("nemenyi" + ext)).string() + "\n" : skipped);
      out << "wrote " << dir.string() << "\n";
      return kExitOk;
    }
    out << results << '\n' << summary << '\n';
    if (posthoc)
      out << nemenyi_text;
    else
      out << skipped;
    return kExitOk;
  });
}

int cmd_simulate(const std::optional<fs::path>& config_path, const std::optional<fs::path>& out_path,
                 std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SimConfig config = default_sim_config();
    if (config_path) {
      auto in = open_input(*config_path);
      config = parse_sim_config(in);
    }
    if (seed) config.seed = *seed;
    const auto records = simulate(config);
    if (out_path) {
      std::ofstream file(*out_path, std::ios::binary);
      if (!file) throw InputError("cannot write " + out_path->string());
      write_jsonl(records, file);
      err << "wrote " << records.size() << " records to " << out_path->string() << '\n';
    } else {
      write_jsonl(records, out);
    }
    return kExitOk;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_threads_from_env();
  CLI::App app{"Rank-based statistical evaluation of benchmark score logs"};
  app.name(args.empty() ? "rigorbench" : args.front());
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string strategy_name = "best-val";
  std::size_t n = 30;
  std::optional<int> epochs;

  auto* validate_cmd = app.add_subcommand("validate", "Check score logs against the selection preconditions");
  validate_cmd->add_option("inputs", inputs, "Score log files (.jsonl or .csv)")->required();
  validate_cmd->add_option("--strategy", strategy_name, "Strategy the logs must support (best-val needs a val split)");
  validate_cmd->add_option("--epochs", epochs, "Expected number of epochs per run");

  PipelineConfig config;
  std::string format_name = "markdown";
  std::string out_dir;
  std::string algorithms;
  std::string datasets;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Select, aggregate, test and report");
  evaluate_cmd->add_option("inputs", inputs, "Score logs or summary CSV files")->required();
  evaluate_cmd->add_option("--strategy", strategy_name, "best-epoch | last-n | best-val")->capture_default_str();
  evaluate_cmd->add_option("--n", n, "Epoch count for last-n")->capture_default_str();
  evaluate_cmd->add_option("--alpha", config.alpha, "Significance level")->capture_default_str();
  evaluate_cmd->add_option("--format", format_name, "markdown | latex | csv")->capture_default_str();
  evaluate_cmd->add_option("--out", out_dir, "Output directory (default: standard output)");
  evaluate_cmd->add_option("--seed", config.seed, "Seed of the Monte-Carlo permutation oracle")->capture_default_str();
  evaluate_cmd->add_option("--permutations", config.permutations, "Monte-Carlo permutation samples (0 = off)")
      ->capture_default_str();
  evaluate_cmd->add_flag("--force-posthoc", config.force_posthoc, "Run Nemenyi even if the omnibus test does not reject");
  evaluate_cmd->add_flag("--summary", config.summary_input, "Inputs are per-run summary CSVs");
  evaluate_cmd->add_option("--algorithms", algorithms, "Comma-separated row order");
  evaluate_cmd->add_option("--datasets", datasets, "Comma-separated column order");

  std::string sim_config;
  std::string sim_out;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate synthetic score logs (JSONL)");
  simulate_cmd->add_option("config", sim_config, "key = value configuration file (default settings if omitted)");
  simulate_cmd->add_option("--out", sim_out, "Output JSONL path (default: standard output)");
  simulate_cmd->add_option("--seed", sim_seed, "Override the configured seed");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const auto paths = [&] { return std::vector<fs::path>(inputs.begin(), inputs.end()); };
  const auto split_list = [](const std::string& list) {
    std::vector<std::string> items;
    std::stringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) items.push_back(item);
    return items;
  };

  if (validate_cmd->parsed()) {
    return guarded(err, [&] {
      ValidationRequirements req;
      req.need_validation_split = parse_strategy(strategy_name, n).kind == SelectionStrategy::Kind::best_validation;
      req.expected_epochs = epochs;
      return cmd_validate(paths(), req, out, err);
    });
  }
  if (evaluate_cmd->parsed()) {
    return guarded(err, [&] {
      config.inputs = paths();
      config.strategy = parse_strategy(strategy_name, n);
      config.format = parse_report_kind(format_name);
      if (!out_dir.empty()) config.out_dir = out_dir;
      config.algorithm_order = split_list(algorithms);
      config.dataset_order = split_list(datasets);
      return cmd_evaluate(config, out, err);
    });
  }
  std::optional<fs::path> cfg_path;
  std::optional<fs::path> out_path;
  if (!sim_config.empty()) cfg_path = sim_config;
  if (!sim_out.empty()) out_path = sim_out;
  return cmd_simulate(cfg_path, out_path, sim_seed, out, err);
}

}  // namespace rigorbench
