#include "rigorbench/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "rigorbench/error.hpp"

namespace rigorbench {

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string scientific(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", value);
  return buf;
}

std::string latex_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '_' || ch == '&' || ch == '%' || ch == '#' || ch == '$') out += '\\';
    out += ch;
  }
  return out;
}

std::string markdown_row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const auto& c : cells) out += " " + c + " |";
  return out + "\n";
}

std::string latex_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? " & " : "") + cells[i];
  return out + " \\\\\n";
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                  ReportFormat::Kind kind) {
  std::string out;
  if (kind == ReportFormat::Kind::markdown) {
    out += markdown_row(header);
    out += "|";
    for (std::size_t i = 0; i < header.size(); ++i) out += i == 0 ? "---|" : ":---:|";
    out += "\n";
    for (const auto& row : rows) out += markdown_row(row);
    return out;
  }
  out += "\\begin{tabular}{@{}l" + std::string(header.size() - 1, 'c') + "@{}}\n";
  out += "\\toprule\n";
  std::vector<std::string> escaped;
  for (const auto& h : header) escaped.push_back(latex_escape(h));
  out += latex_row(escaped);
  out += "\\midrule\n";
  for (auto row : rows) {
    row.front() = latex_escape(row.front());
    out += latex_row(row);
  }
  out += "\\bottomrule\n\\end{tabular}\n";
  return out;
}

}  // namespace

ReportFormat::Kind parse_report_kind(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::Kind::markdown;
  if (name == "latex" || name == "tex") return ReportFormat::Kind::latex;
  if (name == "csv") return ReportFormat::Kind::csv;
  throw InputError("unknown report format \"" + std::string(name) + "\" (expected markdown, latex or csv)");
}

std::string file_extension(ReportFormat::Kind kind) {
  switch (kind) {
    case ReportFormat::Kind::markdown: return "md";
    case ReportFormat::Kind::latex: return "tex";
    case ReportFormat::Kind::csv: return "csv";
  }
  return "txt";
}

std::string format_score(double mean, double stddev, ReportFormat::Kind kind) {
  const char* pm = kind == ReportFormat::Kind::latex ? " $\\pm$ " : " ± ";
  return fixed(mean, 1) + pm + fixed(stddev, 1);
}

std::string format_p(double p) {
  if (p < 0.005) return "<0.01";
  return fixed(p, 2);
}

std::string render_results_table(const std::vector<CellStats>& cells, const std::vector<std::string>& algorithms,
                                 const std::vector<std::string>& datasets, const ReportFormat& format) {
  std::map<std::pair<std::string, std::string>, const CellStats*> lookup;
  for (const auto& c : cells) lookup[{c.algorithm, c.dataset}] = &c;
  const auto find = [&](const std::string& a, const std::string& d) -> const CellStats& {
    const auto it = lookup.find({a, d});
    if (it == lookup.end()) throw InputError("results table is missing cell (" + a + ", " + d + ")");
    return *it->second;
  };

  if (format.kind == ReportFormat::Kind::csv) {
    std::vector<CellStats> ordered;
    for (const auto& a : algorithms)
      for (const auto& d : datasets) ordered.push_back(find(a, d));
    std::ostringstream out;
    write_cells_csv(ordered, out);
    return out.str();
  }

  std::vector<std::string> header{"Algorithm"};
  header.insert(header.end(), datasets.begin(), datasets.end());
  std::vector<std::vector<std::string>> rows;
  for (const auto& a : algorithms) {
    std::vector<std::string> row{a};
    for (const auto& d : datasets) {
      const auto& c = find(a, d);
      row.push_back(format_score(c.mean, c.stddev, format.kind));
    }
    rows.push_back(std::move(row));
  }
  return table(header, rows, format.kind);
}

std::string render_nemenyi_table(const NemenyiMatrix& nemenyi, const ReportFormat& format) {
  const std::size_t n = nemenyi.n();
  if (format.kind == ReportFormat::Kind::csv) {
    std::ostringstream out;
    out << "algorithm_a,algorithm_b,rank_diff,standard_error,q,p_value,significant\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& c = nemenyi(i, j);
        out << nemenyi.algorithms[i] << ',' << nemenyi.algorithms[j] << ',' << format_double(c.rank_diff) << ','
            << format_double(c.standard_error) << ',' << format_double(c.q) << ',' << format_double(c.p_value)
            << ',' << (c.p_value < format.alpha ? "true" : "false") << '\n';
      }
    return out.str();
  }

  std::vector<std::string> header{"Algorithm"};
  header.insert(header.end(), nemenyi.algorithms.begin(), nemenyi.algorithms.end());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<std::string> row{nemenyi.algorithms[i]};
    for (std::size_t j = 0; j < n; ++j) {
      if (j <= i) {
        row.emplace_back();
        continue;
      }
      const auto& c = nemenyi(i, j);
      std::string text = format_p(c.p_value);
      if (c.p_value < format.alpha)
        text = format.kind == ReportFormat::Kind::latex ? "\\textbf{" + text + "}" : "**" + text + "**";
      row.push_back(std::move(text));
    }
    rows.push_back(std::move(row));
  }
  return table(header, rows, format.kind);
}

std::string render_friedman_summary(const FriedmanResult& r, const ReportFormat& format) {
  std::ostringstream out;
  const std::string decision = r.reject ? "reject H0" : "fail to reject H0";
  const std::string ff = r.degenerate ? "inf" : fixed(r.ff, 3);
  switch (format.kind) {
    case ReportFormat::Kind::csv:
      out << "key,value\n";
      out << "chi2," << format_double(r.chi2) << '\n';
      out << "chi2_p_value," << format_double(r.chi2_p_value) << '\n';
      out << "ff," << (r.degenerate ? "inf" : format_double(r.ff)) << '\n';
      out << "df1," << r.df1 << '\n';
      out << "df2," << r.df2 << '\n';
      out << "p_value," << format_double(r.p_value) << '\n';
      out << "alpha," << format_double(r.alpha) << '\n';
      out << "reject," << (r.reject ? "true" : "false") << '\n';
      out << "degenerate," << (r.degenerate ? "true" : "false") << '\n';
      break;
    case ReportFormat::Kind::latex:
      out << "Friedman test with Iman-Davenport extension: $\\chi^2_F = " << fixed(r.chi2, 3) << "$, $F_F = "
          << (r.degenerate ? "\\infty" : ff) << "$ ($df_1 = " << r.df1 << "$, $df_2 = " << r.df2 << "$), $p = "
          << (r.p_value < 0.005 ? scientific(r.p_value) : fixed(r.p_value, 2)) << "$, $\\alpha = "
          << format_double(r.alpha) << "$: " << (r.reject ? "reject $H_0$" : "fail to reject $H_0$") << ".\n";
      if (r.degenerate)
        out << "Perfect rank consistency: every dataset ranks the algorithms identically, $p$ reported as 0.\n";
      break;
    case ReportFormat::Kind::markdown:
      out << "Friedman test with Iman-Davenport extension\n";
      out << "- chi2_F = " << fixed(r.chi2, 3) << " (df = " << r.df1 << ", chi2 p = " << scientific(r.chi2_p_value)
          << ")\n";
      out << "- F_F = " << ff << " (df1 = " << r.df1 << ", df2 = " << r.df2 << ")\n";
      out << "- p = " << format_p(r.p_value);
      if (r.p_value < 0.005) out << " (" << scientific(r.p_value) << ")";
      out << "\n- alpha = " << format_double(r.alpha) << "\n";
      out << "- decision: " << decision << "\n";
      if (r.degenerate)
        out << "- note: perfect rank consistency across datasets; F_F is unbounded and p is reported as 0\n";
      break;
  }
  return out.str();
}

}  // namespace rigorbench
