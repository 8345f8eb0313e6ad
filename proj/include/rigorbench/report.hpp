#pragma once

#include <string>
#include <vector>

#include "rigorbench/aggregate.hpp"
#include "rigorbench/stats.hpp"

namespace rigorbench {

struct ReportFormat {
  enum class Kind { markdown, latex, csv };
  Kind kind = Kind::markdown;
  double alpha = 0.05;  // bolding threshold for p-value tables
};

// "markdown" | "md", "latex" | "tex", "csv". Throws InputError.
ReportFormat::Kind parse_report_kind(std::string_view name);
std::string file_extension(ReportFormat::Kind kind);

// "M.M ± S.S" (LaTeX: "M.M $\pm$ S.S").
std::string format_score(double mean, double stddev, ReportFormat::Kind kind);
// Two decimals; values below 0.005 print as "<0.01".
std::string format_p(double p);

// Algorithms as rows, datasets as columns, no cross-dataset average.
// CSV output is cells.csv at full precision in grid order.
std::string render_results_table(const std::vector<CellStats>& cells, const std::vector<std::string>& algorithms,
                                 const std::vector<std::string>& datasets, const ReportFormat& format);

// Upper-triangular p-value matrix; significant entries in bold.
std::string render_nemenyi_table(const NemenyiMatrix& nemenyi, const ReportFormat& format);

std::string render_friedman_summary(const FriedmanResult& result, const ReportFormat& format);

}  // namespace rigorbench
