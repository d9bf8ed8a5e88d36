#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pathrobust/harness/manifest.hpp"
#include "pathrobust/metrics.hpp"

namespace pathrobust::harness {

enum class ReportFormat { Table, Csv, Json };

ReportFormat parse_report_format(const std::string& name);

// CSV with a required header naming the columns
//   sample_id,kind,severity,true_label,pred_label,confidence
// in any order. `kind` is a corruption name or "clean".
std::vector<PredictionRecord> parse_predictions(std::istream& in, const std::string& source);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);
void write_predictions(std::ostream& out, std::span<const PredictionRecord> records);

// Builds the report and, when a manifest is given, adds warnings for every
// manifest entry without a prediction and for cell counts that disagree.
RobustnessReport evaluate(std::span<const PredictionRecord> records,
                          const CorruptedManifest* manifest = nullptr);

std::string format_report(const RobustnessReport& report, ReportFormat format);

}  // namespace pathrobust::harness
