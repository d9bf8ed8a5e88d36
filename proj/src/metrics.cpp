#include "pathrobust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "pathrobust/error.hpp"

namespace pathrobust {

namespace {

std::string cell_name(CorruptionKind kind, Severity severity) {
  return "(" + std::string(kind_name(kind)) + ", " + std::to_string(severity.level()) + ")";
}

std::string record_key_name(const PredictionRecord& r) {
  return r.sample_id + "/" + (r.kind ? std::string(kind_name(*r.kind)) : std::string("clean")) +
         "/" + std::to_string(r.severity.level());
}

}  // namespace

void validate_record(const PredictionRecord& record) {
  if (record.clean() != record.severity.clean()) {
    throw ValidationError("record " + record.sample_id +
                          ": clean records must have severity 0 and corrupted ones 1..5");
  }
  if (!(record.confidence >= 0.0 && record.confidence <= 1.0)) {
    throw ValidationError("record " + record.sample_id + ": confidence " +
                          std::to_string(record.confidence) + " outside [0, 1]");
  }
}

CellCount& ErrorMatrix::counts(CorruptionKind kind, Severity severity) {
  if (severity.clean()) throw ValidationError("error matrix cells use severities 1..5");
  return cells_[kind_index(kind)][severity.level() - 1];
}

const CellCount& ErrorMatrix::counts(CorruptionKind kind, Severity severity) const {
  if (severity.clean()) throw ValidationError("error matrix cells use severities 1..5");
  return cells_[kind_index(kind)][severity.level() - 1];
}

std::vector<ErrorMatrix::Cell> ErrorMatrix::missing_cells() const {
  std::vector<Cell> missing;
  for (const CorruptionKind kind : kAllKinds) {
    for (int s = 1; s <= kNumSeverities; ++s) {
      if (cells_[kind_index(kind)][s - 1].total == 0) missing.emplace_back(kind, Severity(s));
    }
  }
  return missing;
}

void ErrorMatrix::merge(const ErrorMatrix& other) {
  clean_.merge(other.clean_);
  for (int k = 0; k < kNumKinds; ++k) {
    for (int s = 0; s < kNumSeverities; ++s) cells_[k][s].merge(other.cells_[k][s]);
  }
}

std::vector<int> ConfidenceSequence::missing_severities() const {
  std::vector<int> missing;
  for (int s = 0; s <= kNumSeverities; ++s) {
    if (!values[s]) missing.push_back(s);
  }
  return missing;
}

double error_rate(std::span<const PredictionRecord> records) {
  if (records.empty()) throw InsufficientDataError("error_rate: no records");
  CellCount count;
  for (const auto& r : records) count.add(r.pred_label != r.true_label);
  return *count.rate();
}

double corruption_error(const ErrorMatrix& matrix) {
  const auto missing = matrix.missing_cells();
  if (!missing.empty()) {
    std::string names;
    for (const auto& [kind, severity] : missing) {
      if (!names.empty()) names += ", ";
      names += cell_name(kind, severity);
    }
    throw IncompleteMatrixError("corruption_error: missing cells " + names);
  }
  double sum = 0.0;
  for (const CorruptionKind kind : kAllKinds) {
    for (int s = 1; s <= kNumSeverities; ++s) sum += *matrix.cell(kind, Severity(s));
  }
  return sum / (kNumKinds * kNumSeverities);
}

std::optional<double> kind_corruption_error(const ErrorMatrix& matrix, CorruptionKind kind) {
  double sum = 0.0;
  for (int s = 1; s <= kNumSeverities; ++s) {
    const auto e = matrix.cell(kind, Severity(s));
    if (!e) return std::nullopt;
    sum += *e;
  }
  return sum / kNumSeverities;
}

double relative_ce(double ce, double clean_error) {
  if (!(clean_error > 0.0)) {
    throw UndefinedRatioError("relative_ce: clean error is zero, rCE is undefined");
  }
  return ce / clean_error;
}

int kendall_swaps(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  int swaps = 0;
  for (std::size_t pass = 0; pass + 1 < v.size(); ++pass) {
    for (std::size_t j = 0; j + 1 < v.size() - pass; ++j) {
      if (v[j] < v[j + 1]) {
        std::swap(v[j], v[j + 1]);
        ++swaps;
      }
    }
  }
  return swaps;
}

int kendall_swaps(const ConfidenceSequence& sequence) {
  const auto missing = sequence.missing_severities();
  if (!missing.empty()) {
    std::string list;
    for (const int s : missing) {
      if (!list.empty()) list += ", ";
      list += std::to_string(s);
    }
    throw IncompleteSequenceError("sequence " + sequence.sample_id + "/" +
                                  std::string(kind_name(sequence.kind)) +
                                  " lacks severities " + list);
  }
  std::array<double, kNumSeverities + 1> values;
  for (int s = 0; s <= kNumSeverities; ++s) values[s] = *sequence.values[s];
  return kendall_swaps(values);
}

double cec(std::span<const ConfidenceSequence> sequences) {
  if (sequences.empty()) throw InsufficientDataError("cec: no confidence sequences");
  std::uint64_t swaps = 0;
  for (const auto& seq : sequences) swaps += static_cast<std::uint64_t>(kendall_swaps(seq));
  return static_cast<double>(swaps) /
         (static_cast<double>(kSequencePairs) * static_cast<double>(sequences.size()));
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("pearson_r: series lengths differ");
  if (xs.size() < 2) throw ValidationError("pearson_r: need at least two points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) {
    throw UndefinedCorrelationError("pearson_r: a series has zero variance");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw UndefinedCorrelationError("pearson_r: a series has zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<PredictionRecord> deduplicate(std::span<const PredictionRecord> records,
                                          std::vector<std::string>* warnings) {
  using Key = std::tuple<std::string, int, int>;
  std::map<Key, std::size_t> position;
  std::vector<PredictionRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    Key key{r.sample_id, r.kind ? kind_index(*r.kind) : -1, r.severity.level()};
    const auto [it, inserted] = position.emplace(std::move(key), out.size());
    if (inserted) {
      out.push_back(r);
    } else {
      out[it->second] = r;
      if (warnings) warnings->push_back("duplicate record " + record_key_name(r) + " replaced");
    }
  }
  return out;
}

ErrorMatrix build_error_matrix(std::span<const PredictionRecord> records,
                               std::vector<std::string>* warnings) {
  const auto unique = deduplicate(records, warnings);
  ErrorMatrix matrix;
  for (const auto& r : unique) {
    validate_record(r);
    const bool wrong = r.pred_label != r.true_label;
    if (r.clean()) {
      matrix.clean_counts().add(wrong);
    } else {
      matrix.counts(*r.kind, r.severity).add(wrong);
    }
  }
  if (matrix.clean_counts().total == 0) {
    throw MissingBaselineError("no clean (severity 0) records: clean error is undefined");
  }
  return matrix;
}

std::vector<ConfidenceSequence> build_confidence_sequences(
    std::span<const PredictionRecord> records, std::vector<std::string>* warnings) {
  const auto unique = deduplicate(records, warnings);
  std::map<std::string, double> clean_confidence;
  std::map<std::pair<std::string, int>, ConfidenceSequence> sequences;
  for (const auto& r : unique) {
    validate_record(r);
    if (r.clean()) {
      clean_confidence[r.sample_id] = r.confidence;
      continue;
    }
    auto& seq = sequences[{r.sample_id, kind_index(*r.kind)}];
    seq.sample_id = r.sample_id;
    seq.kind = *r.kind;
    seq.values[r.severity.level()] = r.confidence;
  }
  std::vector<ConfidenceSequence> out;
  out.reserve(sequences.size());
  for (auto& [key, seq] : sequences) {
    if (const auto it = clean_confidence.find(seq.sample_id); it != clean_confidence.end()) {
      seq.values[0] = it->second;
    }
    out.push_back(std::move(seq));
  }
  return out;
}

RobustnessReport build_report(std::span<const PredictionRecord> records) {
  RobustnessReport report;
  const auto unique = deduplicate(records, &report.warnings);
  report.matrix = build_error_matrix(unique);
  report.clean_error = report.matrix.clean_error();
  report.missing_cells = report.matrix.missing_cells();
  for (const auto& [kind, severity] : report.missing_cells) {
    report.warnings.push_back("missing cell " + cell_name(kind, severity));
  }
  if (report.missing_cells.empty()) report.ce = corruption_error(report.matrix);
  if (report.ce && report.clean_error && *report.clean_error > 0.0) {
    report.rce = relative_ce(*report.ce, *report.clean_error);
  } else if (report.ce) {
    report.warnings.push_back("clean error is zero: rCE omitted");
  }

  std::vector<ConfidenceSequence> complete;
  for (auto& seq : build_confidence_sequences(unique)) {
    const auto missing = seq.missing_severities();
    if (missing.empty()) {
      complete.push_back(std::move(seq));
      continue;
    }
    std::string list;
    for (const int s : missing) {
      if (!list.empty()) list += ",";
      list += std::to_string(s);
    }
    report.warnings.push_back("dropped incomplete confidence sequence " + seq.sample_id + "/" +
                              std::string(kind_name(seq.kind)) + " (missing severities " + list +
                              ")");
  }
  if (!complete.empty()) report.cec = cec(complete);

  for (const CorruptionKind kind : kAllKinds) {
    KindBreakdown b{kind, kind_corruption_error(report.matrix, kind), std::nullopt, 0};
    std::vector<ConfidenceSequence> of_kind;
    for (const auto& seq : complete) {
      if (seq.kind == kind) of_kind.push_back(seq);
    }
    b.sequences = of_kind.size();
    if (!of_kind.empty()) b.cec = cec(of_kind);
    report.per_kind.push_back(std::move(b));
  }
  return report;
}

}  // namespace pathrobust
