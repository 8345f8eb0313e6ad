#include "rigorbench/scorelog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "rigorbench/error.hpp"

namespace rigorbench {

namespace {

constexpr std::string_view kRecordHeader = "algorithm,run,epoch,dataset,split,metric,value";
constexpr std::string_view kSummaryHeader = "algorithm,run,dataset,mean,std,count";

std::string line_prefix(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

std::string_view trim_eol(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
    line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Split parse_split(std::string_view text) {
  if (text == "val") return Split::validation;
  if (text == "test") return Split::test;
  throw InputError("split must be \"val\" or \"test\", got \"" + std::string(text) + "\"");
}

void require_identifier(std::string_view text, std::string_view what) {
  if (text.empty()) throw InputError(std::string(what) + " must be a non-empty string");
}

bool is_accuracy_metric(std::string_view metric) {
  return metric.find("acc") != std::string_view::npos;
}

}  // namespace

std::string_view to_string(Split split) {
  return split == Split::validation ? "val" : "test";
}

RecordKey key_of(const ScoreRecord& r) {
  return RecordKey{r.algorithm, r.run, r.epoch, r.dataset, r.split, r.metric};
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw InputError("unparsable number for " + std::string(what) + ": \"" + std::string(text) + "\"");
  if (!std::isfinite(value)) throw InputError(std::string(what) + " must be finite");
  return value;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw InputError("unparsable integer for " + std::string(what) + ": \"" + std::string(text) + "\"");
  return value;
}

RecordSet::RecordSet(std::vector<ScoreRecord> records, std::optional<int> declared_epochs)
    : records_(std::move(records)), declared_epochs_(declared_epochs) {
  for (const auto& r : records_) {
    if (!std::isfinite(r.value))
      throw InputError("non-finite value for " + r.algorithm + " run " + std::to_string(r.run) +
                       " epoch " + std::to_string(r.epoch));
    if (r.run < 1) throw InputError("run must be >= 1, got " + std::to_string(r.run));
    if (r.epoch < 1) throw InputError("epoch must be >= 1, got " + std::to_string(r.epoch));
  }
  if (declared_epochs_ && *declared_epochs_ < 1) throw InputError("declared epoch count must be >= 1");
  std::sort(records_.begin(), records_.end(),
            [](const ScoreRecord& a, const ScoreRecord& b) { return key_of(a) < key_of(b); });
  const auto dup = std::adjacent_find(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
    return key_of(a) == key_of(b);
  });
  if (dup != records_.end())
    throw InputError("duplicate record key (" + dup->algorithm + ", run " + std::to_string(dup->run) +
                     ", epoch " + std::to_string(dup->epoch) + ", " + dup->dataset + ", " +
                     std::string(to_string(dup->split)) + ", " + dup->metric + ")");
}

RecordSet RecordSet::merge(const RecordSet& a, const RecordSet& b) {
  std::vector<ScoreRecord> all = a.records_;
  all.insert(all.end(), b.records_.begin(), b.records_.end());
  auto epochs = a.declared_epochs_ ? a.declared_epochs_ : b.declared_epochs_;
  return RecordSet(std::move(all), epochs);
}

RecordSet parse_jsonl(std::istream& in) {
  static const std::set<std::string, std::less<>> kFields = {"algorithm", "run",    "epoch", "dataset",
                                                             "split",     "metric", "value"};
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_eol(line).empty()) continue;
    try {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
      }
      if (!obj.is_object()) throw InputError("expected a JSON object");
      for (const auto& item : obj.items())
        if (!kFields.contains(item.key())) throw InputError("unknown field \"" + item.key() + "\"");
      for (const auto& field : kFields)
        if (!obj.contains(field)) throw InputError("missing field \"" + field + "\"");

      ScoreRecord r;
      const auto get_string = [&](const char* name) {
        const auto& v = obj.at(name);
        if (!v.is_string()) throw InputError(std::string(name) + " must be a string");
        std::string s = v.get<std::string>();
        require_identifier(s, name);
        return s;
      };
      const auto get_int = [&](const char* name) {
        const auto& v = obj.at(name);
        if (!v.is_number_integer()) throw InputError(std::string(name) + " must be an integer");
        const auto raw = v.get<long long>();
        if (raw < 1 || raw > 1'000'000'000) throw InputError(std::string(name) + " must be >= 1");
        return static_cast<int>(raw);
      };
      r.algorithm = get_string("algorithm");
      r.run = get_int("run");
      r.epoch = get_int("epoch");
      r.dataset = get_string("dataset");
      r.split = parse_split(get_string("split"));
      r.metric = get_string("metric");
      const auto& value = obj.at("value");
      if (!value.is_number()) throw InputError("value must be a finite JSON number");
      r.value = value.get<double>();
      if (!std::isfinite(r.value)) throw InputError("value must be a finite JSON number");
      records.push_back(std::move(r));
    } catch (const InputError& e) {
      throw InputError(line_prefix(line_no) + e.what());
    }
  }
  return RecordSet(std::move(records));
}

RecordSet parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return RecordSet{};
  const auto header = trim_eol(line);
  if (header != kRecordHeader) {
    for (std::string_view col : split_commas(kRecordHeader))
      if (header.find(col) == std::string_view::npos)
        throw InputError("line 1: missing column \"" + std::string(col) + "\"");
    throw InputError("line 1: header must be \"" + std::string(kRecordHeader) + "\"");
  }
  std::vector<ScoreRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim_eol(line);
    if (row.empty()) continue;
    try {
      const auto cols = split_commas(row);
      if (cols.size() != 7)
        throw InputError("expected 7 columns, got " + std::to_string(cols.size()));
      ScoreRecord r;
      r.algorithm = std::string(cols[0]);
      require_identifier(r.algorithm, "algorithm");
      r.run = parse_int(cols[1], "run");
      if (r.run < 1) throw InputError("run must be >= 1");
      r.epoch = parse_int(cols[2], "epoch");
      if (r.epoch < 1) throw InputError("epoch must be >= 1");
      r.dataset = std::string(cols[3]);
      require_identifier(r.dataset, "dataset");
      r.split = parse_split(cols[4]);
      r.metric = std::string(cols[5]);
      require_identifier(r.metric, "metric");
      r.value = parse_double(cols[6], "value");
      records.push_back(std::move(r));
    } catch (const InputError& e) {
      throw InputError(line_prefix(line_no) + e.what());
    }
  }
  return RecordSet(std::move(records));
}

std::vector<SummaryRecord> parse_summary_csv(std::istream& in) {
  std::string line;
  std::vector<SummaryRecord> rows;
  if (!std::getline(in, line)) return rows;
  const auto header = trim_eol(line);
  if (header != kSummaryHeader) {
    for (std::string_view col : split_commas(kSummaryHeader))
      if (header.find(col) == std::string_view::npos)
        throw InputError("line 1: missing column \"" + std::string(col) + "\"");
    throw InputError("line 1: header must be \"" + std::string(kSummaryHeader) + "\"");
  }
  std::set<std::tuple<std::string, int, std::string>> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim_eol(line);
    if (row.empty()) continue;
    try {
      const auto cols = split_commas(row);
      if (cols.size() != 6)
        throw InputError("expected 6 columns, got " + std::to_string(cols.size()));
      SummaryRecord s;
      s.algorithm = std::string(cols[0]);
      require_identifier(s.algorithm, "algorithm");
      s.run = parse_int(cols[1], "run");
      if (s.run < 1) throw InputError("run must be >= 1");
      s.dataset = std::string(cols[2]);
      require_identifier(s.dataset, "dataset");
      s.mean = parse_double(cols[3], "mean");
      s.stddev = parse_double(cols[4], "std");
      if (s.stddev < 0.0) throw InputError("std must be >= 0");
      s.count = parse_int(cols[5], "count");
      if (s.count < 1) throw InputError("count must be >= 1");
      if (s.count == 1 && s.stddev != 0.0) throw InputError("std must be 0 when count is 1");
      if (!seen.emplace(s.algorithm, s.run, s.dataset).second)
        throw InputError("duplicate summary for (" + s.algorithm + ", run " + std::to_string(s.run) +
                         ", " + s.dataset + ")");
      rows.push_back(std::move(s));
    } catch (const InputError& e) {
      throw InputError(line_prefix(line_no) + e.what());
    }
  }
  return rows;
}

std::string to_jsonl_line(const ScoreRecord& r) {
  // Fixed key order; the numeric value keeps full precision.
  nlohmann::ordered_json obj;
  obj["algorithm"] = r.algorithm;
  obj["run"] = r.run;
  obj["epoch"] = r.epoch;
  obj["dataset"] = r.dataset;
  obj["split"] = std::string(to_string(r.split));
  obj["metric"] = r.metric;
  obj["value"] = r.value;
  return obj.dump();
}

void write_jsonl(const RecordSet& records, std::ostream& out) {
  for (const auto& r : records.records()) out << to_jsonl_line(r) << '\n';
}

void write_csv(const RecordSet& records, std::ostream& out) {
  out << kRecordHeader << '\n';
  for (const auto& r : records.records())
    out << r.algorithm << ',' << r.run << ',' << r.epoch << ',' << r.dataset << ',' << to_string(r.split)
        << ',' << r.metric << ',' << format_double(r.value) << '\n';
}

void write_summary_csv(const std::vector<SummaryRecord>& rows, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const auto& s : rows)
    out << s.algorithm << ',' << s.run << ',' << s.dataset << ',' << format_double(s.mean) << ','
        << format_double(s.stddev) << ',' << s.count << '\n';
}

bool ValidationReport::ok() const noexcept { return error_count() == 0; }

std::size_t ValidationReport::error_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const noexcept { return findings.size() - error_count(); }

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& f : findings)
    out << (f.severity == Severity::error ? "error" : "warning") << ": " << f.location << ": " << f.message << '\n';
  out << (ok() ? "ok" : "failed") << " (" << error_count() << " errors, " << warning_count() << " warnings)\n";
  return out.str();
}

ValidationReport validate(const RecordSet& records, const ValidationRequirements& req) {
  ValidationReport report;
  auto add = [&](Severity sev, std::string loc, std::string msg) {
    report.findings.push_back(Finding{sev, std::move(loc), std::move(msg)});
  };
  const std::optional<int> expected = req.expected_epochs ? req.expected_epochs : records.declared_epochs();

  using SeriesKey = std::tuple<std::string, int, std::string, Split, std::string>;
  std::map<SeriesKey, std::vector<int>> series;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> metrics;  // (alg, dataset) -> metrics
  std::map<std::pair<std::string, int>, std::pair<bool, bool>> runs;             // -> (has val, has test)
  std::size_t out_of_range = 0;
  const ScoreRecord* first_out_of_range = nullptr;

  for (const auto& r : records.records()) {
    series[{r.algorithm, r.run, r.dataset, r.split, r.metric}].push_back(r.epoch);
    metrics[{r.algorithm, r.dataset}].insert(r.metric);
    auto& flags = runs[{r.algorithm, r.run}];
    (r.split == Split::validation ? flags.first : flags.second) = true;
    if (is_accuracy_metric(r.metric) && (r.value < 0.0 || r.value > 100.0)) {
      if (first_out_of_range == nullptr) first_out_of_range = &r;
      ++out_of_range;
    }
  }

  std::map<std::pair<std::string, int>, std::map<Split, std::set<int>>> run_lengths;
  for (const auto& [key, epochs] : series) {
    const auto& [alg, run, dataset, split, metric] = key;
    const std::string loc = alg + " run " + std::to_string(run) + " " + dataset + "/" +
                            std::string(to_string(split)) + "/" + metric;
    // Records arrive in canonical order, so epochs are already sorted.
    const int last = epochs.back();
    std::vector<int> missing;
    for (int e = 1, idx = 0; e <= last; ++e) {
      if (idx < static_cast<int>(epochs.size()) && epochs[static_cast<std::size_t>(idx)] == e)
        ++idx;
      else
        missing.push_back(e);
    }
    if (!missing.empty()) {
      std::string msg = "epochs not contiguous; missing epoch";
      msg += missing.size() == 1 ? " " : "s ";
      for (std::size_t i = 0; i < missing.size() && i < 10; ++i)
        msg += (i ? "," : "") + std::to_string(missing[i]);
      if (missing.size() > 10) msg += ",...";
      add(Severity::error, loc, msg);
    }
    if (expected && last != *expected)
      add(Severity::error, loc,
          "expected " + std::to_string(*expected) + " epochs, found " + std::to_string(last));
    run_lengths[{alg, run}][split].insert(last);
  }

  for (const auto& [key, names] : metrics) {
    if (names.size() > 1) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ",") + n;
      add(Severity::error, key.first + " " + key.second, "runs disagree on metric (" + list + ")");
    }
  }

  for (const auto& [key, flags] : runs) {
    const std::string loc = key.first + " run " + std::to_string(key.second);
    if (!flags.second) add(Severity::error, loc, "no test-split records");
    if (req.need_validation_split && !flags.first)
      add(Severity::error, loc, "missing validation split (required by best-val selection)");
    if (req.need_validation_split && flags.first && flags.second) {
      const auto& lens = run_lengths[key];
      std::set<int> all;
      for (const auto& [split, set] : lens) all.insert(set.begin(), set.end());
      if (all.size() > 1) add(Severity::error, loc, "validation and test series cover different epoch ranges");
    }
  }

  if (out_of_range > 0) {
    const auto& r = *first_out_of_range;
    add(Severity::warning, r.algorithm + " run " + std::to_string(r.run) + " epoch " + std::to_string(r.epoch),
        std::to_string(out_of_range) + " accuracy value(s) outside [0, 100], first " + format_double(r.value));
  }
  return report;
}

}  // namespace rigorbench
