#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rigorbench {

enum class Split { validation, test };

std::string_view to_string(Split split);

/// One observed score: algorithm `algorithm`, training run `run`, evaluated
/// after epoch `epoch` on `dataset`/`split` under `metric`. Accuracy values
/// are in percent.
struct ScoreRecord {
  std::string algorithm;
  int run = 1;
  int epoch = 1;
  std::string dataset;
  Split split = Split::test;
  std::string metric;
  double value = 0.0;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

// Identifying tuple of a record; unique within a RecordSet.
struct RecordKey {
  std::string_view algorithm;
  int run;
  int epoch;
  std::string_view dataset;
  Split split;
  std::string_view metric;

  friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
};

RecordKey key_of(const ScoreRecord& record);

/// Immutable collection of score records. Records are kept in canonical key
/// order, so two sets holding the same records compare equal regardless of
/// the order they were read in.
class RecordSet {
 public:
  RecordSet() = default;

  // Throws InputError on a non-finite value, run < 1, epoch < 1 or a
  // duplicate key tuple.
  explicit RecordSet(std::vector<ScoreRecord> records,
                     std::optional<int> declared_epochs = std::nullopt);

  const std::vector<ScoreRecord>& records() const noexcept { return records_; }
  std::optional<int> declared_epochs() const noexcept { return declared_epochs_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  // Union of two disjoint sets (used when several input files are given).
  static RecordSet merge(const RecordSet& a, const RecordSet& b);

  friend bool operator==(const RecordSet&, const RecordSet&) = default;

 private:
  std::vector<ScoreRecord> records_;
  std::optional<int> declared_epochs_;
};

/// Per-run summary of several epoch samples, as printed in "mean ± std"
/// per-run tables. `stddev` is a sample standard deviation over `count`
/// samples.
struct SummaryRecord {
  std::string algorithm;
  int run = 1;
  std::string dataset;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 1;

  friend bool operator==(const SummaryRecord&, const SummaryRecord&) = default;
};

enum class Severity { warning, error };

struct Finding {
  Severity severity;
  std::string location;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const noexcept;
  std::size_t error_count() const noexcept;
  std::size_t warning_count() const noexcept;
  std::string to_text() const;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

struct ValidationRequirements {
  bool need_validation_split = false;
  std::optional<int> expected_epochs;
};

// Parsers throw InputError with a line number on the first defect.
RecordSet parse_jsonl(std::istream& in);
RecordSet parse_csv(std::istream& in);
std::vector<SummaryRecord> parse_summary_csv(std::istream& in);

// Writers emit full-precision numbers; parse(write(x)) == x.
void write_jsonl(const RecordSet& records, std::ostream& out);
void write_csv(const RecordSet& records, std::ostream& out);
void write_summary_csv(const std::vector<SummaryRecord>& rows, std::ostream& out);

std::string to_jsonl_line(const ScoreRecord& record);

/// Checks the preconditions of the selection strategies: contiguous epochs
/// 1..E per series, a consistent metric per (algorithm, dataset), the
/// presence of a validation series when required, and plausible accuracy
/// ranges (warnings only).
ValidationReport validate(const RecordSet& records, const ValidationRequirements& req);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);
// Strict full-string parse; throws InputError naming `what`.
double parse_double(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);

}  // namespace rigorbench
