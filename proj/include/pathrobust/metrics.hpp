#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathrobust/severity.hpp"

namespace pathrobust {

// One model output. `kind` is empty for the clean image, which must carry
// severity 0; corrupted records carry severity 1..5.
struct PredictionRecord {
  std::string sample_id;
  std::optional<CorruptionKind> kind;
  Severity severity;
  int true_label = 0;
  int pred_label = 0;
  double confidence = 0.0;

  bool clean() const { return !kind.has_value(); }
};

// Throws ValidationError on clean/severity mismatch or confidence outside [0, 1].
void validate_record(const PredictionRecord& record);

struct CellCount {
  std::uint64_t wrong = 0;
  std::uint64_t total = 0;

  void add(bool is_wrong) {
    wrong += is_wrong ? 1 : 0;
    ++total;
  }
  void merge(const CellCount& other) {
    wrong += other.wrong;
    total += other.total;
  }
  std::optional<double> rate() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(wrong) / static_cast<double>(total);
  }
  friend bool operator==(const CellCount&, const CellCount&) = default;
};

// E^{c,s} grid plus the clean baseline, kept as integer counts so partial
// aggregates merge exactly.
class ErrorMatrix {
 public:
  using Cell = std::pair<CorruptionKind, Severity>;

  CellCount& counts(CorruptionKind kind, Severity severity);
  const CellCount& counts(CorruptionKind kind, Severity severity) const;
  CellCount& clean_counts() { return clean_; }
  const CellCount& clean_counts() const { return clean_; }

  std::optional<double> cell(CorruptionKind kind, Severity severity) const {
    return counts(kind, severity).rate();
  }
  std::optional<double> clean_error() const { return clean_.rate(); }

  bool complete() const { return missing_cells().empty(); }
  std::vector<Cell> missing_cells() const;

  void merge(const ErrorMatrix& other);

  friend bool operator==(const ErrorMatrix&, const ErrorMatrix&) = default;

 private:
  CellCount clean_;
  std::array<std::array<CellCount, kNumSeverities>, kNumKinds> cells_{};
};

// Confidences of one sample under one corruption, indexed by severity 0..5.
struct ConfidenceSequence {
  std::string sample_id;
  CorruptionKind kind = CorruptionKind::Jpeg;
  std::array<std::optional<double>, kNumSeverities + 1> values{};

  std::vector<int> missing_severities() const;
  bool complete() const { return missing_severities().empty(); }
};

struct KindBreakdown {
  CorruptionKind kind;
  std::optional<double> ce;
  std::optional<double> cec;
  std::size_t sequences = 0;
};

struct PearsonEntry {
  std::string label;
  double r = 0.0;
};

struct RobustnessReport {
  std::optional<double> clean_error;
  std::optional<double> ce;
  std::optional<double> rce;
  std::optional<double> cec;
  ErrorMatrix matrix;
  std::vector<KindBreakdown> per_kind;
  std::vector<ErrorMatrix::Cell> missing_cells;
  std::vector<PearsonEntry> pearson;
  std::vector<std::string> warnings;
};

// Number of pairs in any severity sequence of length N_s + 1 = 6.
inline constexpr int kSequencePairs = (kNumSeverities + 1) * kNumSeverities / 2;

double error_rate(std::span<const PredictionRecord> records);

// Unweighted mean of the 45 cells. Throws IncompleteMatrixError listing the
// missing (kind, severity) cells.
double corruption_error(const ErrorMatrix& matrix);

// Mean of one kind's five severity cells, if all are populated.
std::optional<double> kind_corruption_error(const ErrorMatrix& matrix, CorruptionKind kind);

// CE / clean error. Throws UndefinedRatioError when clean_error is 0.
double relative_ce(double ce, double clean_error);

// Swaps performed by bubble sort putting the sequence in descending order.
// Equal values are never swapped. Throws IncompleteSequenceError.
int kendall_swaps(const ConfidenceSequence& sequence);
int kendall_swaps(std::span<const double> values);

// Mean of kendall_swaps / 15 over sequences; in [0, 1].
double cec(std::span<const ConfidenceSequence> sequences);

// Sample Pearson correlation. Throws UndefinedCorrelationError on zero
// variance and ValidationError on length mismatch or fewer than two points.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

// Last-write-wins on (sample_id, kind, severity); each replaced duplicate
// adds a warning. Output order is the first-seen order of each key.
std::vector<PredictionRecord> deduplicate(std::span<const PredictionRecord> records,
                                          std::vector<std::string>* warnings = nullptr);

// Groups records into cells. Throws MissingBaselineError without clean records.
ErrorMatrix build_error_matrix(std::span<const PredictionRecord> records,
                               std::vector<std::string>* warnings = nullptr);

// One sequence per (sample, kind) seen in corrupted records; severity 0 is
// taken from the sample's clean record. Sorted by (sample_id, kind).
std::vector<ConfidenceSequence> build_confidence_sequences(
    std::span<const PredictionRecord> records, std::vector<std::string>* warnings = nullptr);

// Full report. Missing cells or incomplete sequences are reported as gaps
// with warnings instead of failing.
RobustnessReport build_report(std::span<const PredictionRecord> records);

}  // namespace pathrobust
