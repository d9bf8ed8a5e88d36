#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathrobust/harness/evaluate.hpp"

namespace pathrobust::harness {

struct CorrelationPoint {
  std::string label;
  double benchmark_error = 0.0;
  std::optional<double> validation_error;
  double test_error = 0.0;
};

// CSV with header label,benchmark_error,test_error[,validation_error].
std::vector<CorrelationPoint> parse_correlation_points(std::istream& in, const std::string& source);

struct CorrelationSummary {
  double benchmark_vs_test = 0.0;
  std::optional<double> validation_vs_test;  // when every point has a validation error
  std::vector<CorrelationPoint> points;
};

CorrelationSummary correlate(std::span<const CorrelationPoint> points);

std::string format_correlation(const CorrelationSummary& summary, ReportFormat format);
// Plot data: label,validation_error,benchmark_error,test_error.
std::string correlation_points_csv(const CorrelationSummary& summary);

}  // namespace pathrobust::harness
