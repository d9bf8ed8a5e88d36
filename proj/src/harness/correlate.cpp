#include "pathrobust/harness/correlate.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "pathrobust/error.hpp"

namespace pathrobust::harness {

using nlohmann::json;

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string shortest(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::vector<CorrelationPoint> parse_correlation_points(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty points file (header required)");
  csv::strip_bom(line);
  const csv::Header header(line, source);
  const std::size_t c_label = header.require("label");
  const std::size_t c_bench = header.require("benchmark_error");
  const std::size_t c_test = header.require("test_error");
  const auto c_val = header.find("validation_error");

  std::vector<CorrelationPoint> points;
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
    CorrelationPoint p;
    p.label = std::string(fields[c_label]);
    p.benchmark_error = csv::parse_number<double>(fields[c_bench], source, number, "benchmark_error");
    p.test_error = csv::parse_number<double>(fields[c_test], source, number, "test_error");
    if (c_val && !fields[*c_val].empty()) {
      p.validation_error =
          csv::parse_number<double>(fields[*c_val], source, number, "validation_error");
    }
    points.push_back(std::move(p));
  }
  return points;
}

CorrelationSummary correlate(std::span<const CorrelationPoint> points) {
  CorrelationSummary summary;
  summary.points.assign(points.begin(), points.end());
  std::vector<double> bench;
  std::vector<double> test;
  std::vector<double> val;
  bool all_val = !points.empty();
  for (const auto& p : points) {
    bench.push_back(p.benchmark_error);
    test.push_back(p.test_error);
    if (p.validation_error) {
      val.push_back(*p.validation_error);
    } else {
      all_val = false;
    }
  }
  summary.benchmark_vs_test = pearson_r(bench, test);
  if (all_val) summary.validation_vs_test = pearson_r(val, test);
  return summary;
}

std::string format_correlation(const CorrelationSummary& s, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: {
      std::ostringstream out;
      out << "points                 " << s.points.size() << "\n";
      out << "r(benchmark, test)     " << fixed(s.benchmark_vs_test) << "\n";
      out << "r(validation, test)    "
          << (s.validation_vs_test ? fixed(*s.validation_vs_test) : std::string("null")) << "\n";
      return out.str();
    }
    case ReportFormat::Csv: {
      std::ostringstream out;
      out << "series,r,points\n";
      out << "benchmark_vs_test," << fixed(s.benchmark_vs_test) << "," << s.points.size() << "\n";
      out << "validation_vs_test,"
          << (s.validation_vs_test ? fixed(*s.validation_vs_test) : std::string("null")) << ","
          << s.points.size() << "\n";
      return out.str();
    }
    case ReportFormat::Json: {
      json doc{{"points", s.points.size()},
               {"benchmark_vs_test", s.benchmark_vs_test},
               {"validation_vs_test",
                s.validation_vs_test ? json(*s.validation_vs_test) : json(nullptr)}};
      return doc.dump(2) + "\n";
    }
  }
  return {};
}

std::string correlation_points_csv(const CorrelationSummary& s) {
  std::ostringstream out;
  out << "label,validation_error,benchmark_error,test_error\n";
  for (const auto& p : s.points) {
    out << p.label << "," << (p.validation_error ? shortest(*p.validation_error) : std::string())
        << "," << shortest(p.benchmark_error) << "," << shortest(p.test_error) << "\n";
  }
  return out.str();
}

}  // namespace pathrobust::harness
