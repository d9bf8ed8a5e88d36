#include "pathrobust/harness/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "csv.hpp"
#include "pathrobust/error.hpp"

namespace pathrobust::harness {

using nlohmann::json;

namespace {

std::string fixed(std::optional<double> v, int digits = 6) {
  if (!v) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, *v);
  return buf;
}

json opt_json(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::string format_table(const RobustnessReport& r) {
  std::ostringstream out;
  out << "Error  " << fixed(r.clean_error) << "\n";
  out << "CE     " << fixed(r.ce) << "\n";
  out << "rCE    " << fixed(r.rce) << "\n";
  out << "CEC    " << fixed(r.cec) << "\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %10s %10s %10s %10s %10s %10s %10s\n", "kind", "s1", "s2",
                "s3", "s4", "s5", "CE", "CEC");
  out << line;
  for (const auto& b : r.per_kind) {
    std::snprintf(line, sizeof(line), "%-14s", std::string(kind_name(b.kind)).c_str());
    out << line;
    for (int s = 1; s <= kNumSeverities; ++s) {
      std::snprintf(line, sizeof(line), " %10s", fixed(r.matrix.cell(b.kind, Severity(s))).c_str());
      out << line;
    }
    std::snprintf(line, sizeof(line), " %10s %10s\n", fixed(b.ce).c_str(), fixed(b.cec).c_str());
    out << line;
  }
  for (const auto& p : r.pearson) out << "pearson " << p.label << " " << fixed(p.r) << "\n";
  return out.str();
}

std::string format_csv(const RobustnessReport& r) {
  std::ostringstream out;
  out << "metric,kind,severity,value,count\n";
  out << "error,clean,0," << fixed(r.clean_error) << "," << r.matrix.clean_counts().total << "\n";
  out << "ce,all,," << fixed(r.ce) << ",\n";
  out << "rce,all,," << fixed(r.rce) << ",\n";
  out << "cec,all,," << fixed(r.cec) << ",\n";
  for (const auto& b : r.per_kind) {
    const std::string name(kind_name(b.kind));
    for (int s = 1; s <= kNumSeverities; ++s) {
      const Severity sev(s);
      out << "error," << name << "," << s << "," << fixed(r.matrix.cell(b.kind, sev)) << ","
          << r.matrix.counts(b.kind, sev).total << "\n";
    }
    out << "ce," << name << ",," << fixed(b.ce) << ",\n";
    out << "cec," << name << ",," << fixed(b.cec) << "," << b.sequences << "\n";
  }
  for (const auto& p : r.pearson) out << "pearson," << p.label << ",," << fixed(p.r) << ",\n";
  return out.str();
}

std::string format_json(const RobustnessReport& r) {
  json per_kind = json::array();
  for (const auto& b : r.per_kind) {
    json cells = json::array();
    json counts = json::array();
    for (int s = 1; s <= kNumSeverities; ++s) {
      cells.push_back(opt_json(r.matrix.cell(b.kind, Severity(s))));
      counts.push_back(r.matrix.counts(b.kind, Severity(s)).total);
    }
    per_kind.push_back({{"kind", kind_name(b.kind)},
                        {"error", cells},
                        {"count", counts},
                        {"ce", opt_json(b.ce)},
                        {"cec", opt_json(b.cec)},
                        {"sequences", b.sequences}});
  }
  json missing = json::array();
  for (const auto& [kind, severity] : r.missing_cells) {
    missing.push_back({{"kind", kind_name(kind)}, {"severity", severity.level()}});
  }
  json pearson = json::array();
  for (const auto& p : r.pearson) pearson.push_back({{"label", p.label}, {"r", p.r}});
  json doc{{"error", opt_json(r.clean_error)},
           {"clean_count", r.matrix.clean_counts().total},
           {"ce", opt_json(r.ce)},
           {"rce", opt_json(r.rce)},
           {"cec", opt_json(r.cec)},
           {"per_kind", per_kind},
           {"missing_cells", missing},
           {"pearson", pearson},
           {"warnings", r.warnings}};
  return doc.dump(2) + "\n";
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ValidationError("unknown report format '" + name + "' (expected table, csv or json)");
}

std::vector<PredictionRecord> parse_predictions(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty prediction file (header required)");
  csv::strip_bom(line);
  const csv::Header header(line, source);
  const std::size_t c_id = header.require("sample_id");
  const std::size_t c_kind = header.require("kind");
  const std::size_t c_sev = header.require("severity");
  const std::size_t c_true = header.require("true_label");
  const std::size_t c_pred = header.require("pred_label");
  const std::size_t c_conf = header.require("confidence");

  std::vector<PredictionRecord> records;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.columns()) {
      throw ParseError(source, number,
                       "expected " + std::to_string(header.columns()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    PredictionRecord r;
    r.sample_id = std::string(fields[c_id]);
    if (r.sample_id.empty()) throw ParseError(source, number, "empty sample_id");
    const std::string kind(fields[c_kind]);
    if (kind != "clean") {
      r.kind = parse_kind(kind);
      if (!r.kind) throw ParseError(source, number, "unknown corruption kind '" + kind + "'");
    }
    const int level = csv::parse_number<int>(fields[c_sev], source, number, "severity");
    try {
      r.severity = Severity(level);
      r.true_label = csv::parse_number<int>(fields[c_true], source, number, "true_label");
      r.pred_label = csv::parse_number<int>(fields[c_pred], source, number, "pred_label");
      r.confidence = csv::parse_number<double>(fields[c_conf], source, number, "confidence");
      validate_record(r);
    } catch (const ValidationError& e) {
      throw ParseError(source, number, e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions " + path.string());
  return parse_predictions(in, path.string());
}

void write_predictions(std::ostream& out, std::span<const PredictionRecord> records) {
  out << "sample_id,kind,severity,true_label,pred_label,confidence\n";
  char conf[32];
  for (const auto& r : records) {
    std::snprintf(conf, sizeof(conf), "%.9g", r.confidence);
    out << r.sample_id << "," << (r.kind ? std::string(kind_name(*r.kind)) : "clean") << ","
        << r.severity.level() << "," << r.true_label << "," << r.pred_label << "," << conf << "\n";
  }
}

RobustnessReport evaluate(std::span<const PredictionRecord> records,
                          const CorruptedManifest* manifest) {
  RobustnessReport report = build_report(records);
  if (!manifest) return report;

  using Key = std::tuple<std::string, int, int>;
  std::set<Key> predicted;
  for (const auto& r : records) {
    predicted.emplace(r.sample_id, r.kind ? kind_index(*r.kind) : -1, r.severity.level());
  }
  std::map<std::pair<int, int>, std::uint64_t> expected_cells;
  std::set<std::string> samples;
  for (const auto& e : manifest->entries) {
    samples.insert(e.sample_id);
    ++expected_cells[{kind_index(e.kind), e.severity.level()}];
    if (!predicted.count({e.sample_id, kind_index(e.kind), e.severity.level()})) {
      report.warnings.push_back("no prediction for manifest entry " + e.sample_id + "/" +
                                std::string(kind_name(e.kind)) + "/" +
                                std::to_string(e.severity.level()));
    }
  }
  for (const auto& id : samples) {
    if (!predicted.count({id, -1, 0})) {
      report.warnings.push_back("no clean prediction for manifest sample " + id);
    }
  }
  for (const auto& r : records) {
    if (!samples.count(r.sample_id)) {
      report.warnings.push_back("prediction for sample " + r.sample_id + " not in manifest");
      break;
    }
  }
  for (const auto& [cell, count] : expected_cells) {
    const CorruptionKind kind = kAllKinds[cell.first];
    const std::uint64_t got = report.matrix.counts(kind, Severity(cell.second)).total;
    if (got != count) {
      report.warnings.push_back("cell (" + std::string(kind_name(kind)) + ", " +
                                std::to_string(cell.second) + ") has " + std::to_string(got) +
                                " predictions, manifest lists " + std::to_string(count));
    }
  }
  return report;
}

std::string format_report(const RobustnessReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table:
      return format_table(report);
    case ReportFormat::Csv:
      return format_csv(report);
    case ReportFormat::Json:
      return format_json(report);
  }
  return {};
}

}  // namespace pathrobust::harness
