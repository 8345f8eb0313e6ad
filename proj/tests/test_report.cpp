#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rigorbench/error.hpp"
#include "rigorbench/report.hpp"

using namespace rigorbench;

namespace {

const std::vector<std::string> kAlgorithms{"ERM", "Debiased", "DeepAug", "Geirhos", "InfoDrop", "SagNet", "pAdaIN"};
const std::vector<std::string> kDatasets{"Silhouette", "Edge", "Sketch", "CueConflict", "ImageNet1k", "ImageNetStylized"};

std::vector<CellStats> fixture_cells() {
  std::ifstream in(std::string(RIGORBENCH_FIXTURES) + "/appendix_bestval.csv");
  REQUIRE(in);
  return cells_from_summaries(parse_summary_csv(in), false);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

NemenyiMatrix table2_nemenyi() {
  const auto cells = fixture_cells();
  return nemenyi_test(rank_columns(build_score_matrix(cells, kAlgorithms, kDatasets)));
}

}  // namespace

TEST_CASE("score and p formatting") {
  CHECK(format_score(73.80, 0.12, ReportFormat::Kind::markdown) == "73.8 ± 0.1");
  CHECK(format_score(73.80, 0.12, ReportFormat::Kind::latex) == "73.8 $\\pm$ 0.1");
  CHECK(format_p(0.04) == "0.04");
  CHECK(format_p(1.0) == "1.00");
  CHECK(format_p(0.0049) == "<0.01");
  CHECK(format_p(0.005) == "0.01");
  CHECK(parse_report_kind("tex") == ReportFormat::Kind::latex);
  CHECK_THROWS_AS(parse_report_kind("html"), InputError);
}

TEST_CASE("single cell table") {
  const std::vector<CellStats> cells{{"ERM", "ImageNet1k", 73.8, 0.12, 10}};
  const auto md = render_results_table(cells, {"ERM"}, {"ImageNet1k"}, {});
  CHECK(md == "| Algorithm | ImageNet1k |\n|---|:---:|\n| ERM | 73.8 ± 0.1 |\n");
}

TEST_CASE("LaTeX table of the best-val fixture matches independently formatted cells") {
  std::ifstream in(std::string(RIGORBENCH_FIXTURES) + "/appendix_bestval.csv");
  const auto rows_in = parse_summary_csv(in);
  const auto tex = render_results_table(fixture_cells(), kAlgorithms, kDatasets, {ReportFormat::Kind::latex, 0.05});
  CHECK(tex.find("\\begin{tabular}{@{}lcccccc@{}}") != std::string::npos);
  CHECK(tex.find("\\toprule") != std::string::npos);
  CHECK(tex.find("\\bottomrule") != std::string::npos);

  std::istringstream lines(tex);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line))
    if (line.find("$\\pm$") != std::string::npos) rows.push_back(line);
  REQUIRE(rows.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    std::string expected = kAlgorithms[i];
    for (const auto& d : kDatasets) {
      std::vector<double> runs;
      for (const auto& r : rows_in)
        if (r.algorithm == kAlgorithms[i] && r.dataset == d) runs.push_back(r.mean);
      REQUIRE(runs.size() == 10);
      double sum = 0;
      for (double v : runs) sum += v;
      const double mean = sum / 10;
      double ss = 0;
      for (double v : runs) ss += (v - mean) * (v - mean);
      char cell[64];
      std::snprintf(cell, sizeof(cell), " & %.1f $\\pm$ %.1f", mean, std::sqrt(ss / 9));
      expected += cell;
    }
    CHECK(rows[i] == expected + " \\\\");
  }
}

TEST_CASE("CSV results round-trip") {
  const auto cells = fixture_cells();
  const auto csv = render_results_table(cells, kAlgorithms, kDatasets, {ReportFormat::Kind::csv, 0.05});
  std::istringstream in(csv);
  const auto back = parse_cells_csv(in);
  REQUIRE(back.size() == 42);
  for (const auto& c : back) {
    const auto it = std::find_if(cells.begin(), cells.end(),
                                 [&](const CellStats& x) { return x.algorithm == c.algorithm && x.dataset == c.dataset; });
    REQUIRE(it != cells.end());
    CHECK(*it == c);
  }
}

TEST_CASE("Nemenyi table") {
  const auto nem = table2_nemenyi();
  const auto md = render_nemenyi_table(nem, {ReportFormat::Kind::markdown, 0.05});
  std::size_t entries = 0;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j) {
      CHECK(md.find(format_p(nem(i, j).p_value)) != std::string::npos);
      ++entries;
    }
  CHECK(entries == 21);
  CHECK(md.find("**0.03**") != std::string::npos);
  CHECK(md.find("**0.02**") != std::string::npos);

  const auto tex = render_nemenyi_table(nem, {ReportFormat::Kind::latex, 0.05});
  CHECK(tex.find("\\textbf{0.02}") != std::string::npos);
  CHECK(count(tex, "\\\\\n") == 7);

  const auto csv = render_nemenyi_table(nem, {ReportFormat::Kind::csv, 0.05});
  CHECK(count(csv, "\n") == 22);

  NemenyiMatrix unit{{"a", "b"}, 0.05, std::vector<PairComparison>(4)};
  unit.pairs[1] = {0, 1, 0, 1.0, false};
  const auto plain = render_nemenyi_table(unit, {});
  CHECK(plain.find("1.00") != std::string::npos);
  CHECK(plain.find("**") == std::string::npos);

  unit.pairs[1].p_value = 0.04;
  CHECK(render_nemenyi_table(unit, {}).find("**0.04**") != std::string::npos);
}

TEST_CASE("Friedman summary") {
  FriedmanResult r;
  r.chi2 = 21.875;
  r.ff = 7.743362831858404;
  r.df1 = 6;
  r.df2 = 30;
  r.p_value = 4.376e-5;
  r.chi2_p_value = 1.276e-3;
  r.reject = true;
  const auto md = render_friedman_summary(r, {});
  CHECK(md.find("reject H0") != std::string::npos);
  CHECK(md.find("fail to reject") == std::string::npos);
  CHECK(md.find("7.743") != std::string::npos);
  CHECK(md == render_friedman_summary(r, {}));

  FriedmanResult tied;
  const auto none = render_friedman_summary(tied, {});
  CHECK(none.find("fail to reject H0") != std::string::npos);
  CHECK(none.find("p = 1.00") != std::string::npos);

  FriedmanResult degenerate;
  degenerate.degenerate = true;
  degenerate.reject = true;
  degenerate.p_value = 0.0;
  CHECK(render_friedman_summary(degenerate, {}).find("perfect rank consistency") != std::string::npos);
  CHECK(render_friedman_summary(degenerate, {ReportFormat::Kind::csv, 0.05}).find("degenerate,true") !=
        std::string::npos);
}
