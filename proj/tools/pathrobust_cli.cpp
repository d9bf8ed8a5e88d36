// pathrobust: generate corrupted benchmark variants, evaluate prediction logs,
// and correlate benchmark error with test error.
//
// Exit codes: 0 success, 1 fatal I/O or parse error, 2 validation failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pathrobust/codec.hpp"
#include "pathrobust/corruption.hpp"
#include "pathrobust/error.hpp"
#include "pathrobust/harness/config.hpp"
#include "pathrobust/harness/correlate.hpp"
#include "pathrobust/harness/evaluate.hpp"
#include "pathrobust/harness/generate.hpp"
#include "pathrobust/harness/manifest.hpp"

namespace fs = std::filesystem;
using namespace pathrobust;

namespace {

constexpr int kExitFatal = 1;
constexpr int kExitValidation = 2;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + out_path);
  out << text;
  if (!out) throw IoError("write failed: " + out_path);
}

SeverityTable table_from(const std::string& config_path) {
  return config_path.empty() ? SeverityTable::defaults()
                             : harness::load_severity_table(config_path);
}

CorruptionKind kind_from(const std::string& name) {
  const auto kind = parse_kind(name);
  if (!kind) throw ValidationError("unknown corruption kind '" + name + "'");
  return *kind;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corruption benchmark generator and robustness evaluator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write the 45 corrupted variants of a dataset manifest");
  std::string gen_manifest;
  std::string gen_out;
  std::string gen_config;
  std::uint64_t gen_seed = 0;
  int gen_jobs = 1;
  bool gen_stream = false;
  gen->add_option("manifest", gen_manifest, "Dataset manifest (JSONL)")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Run seed");
  gen->add_option("--config", gen_config, "Severity table override (JSON)");
  gen->add_option("--jobs", gen_jobs, "Worker threads")->check(CLI::PositiveNumber);
  gen->add_flag("--stream", gen_stream, "Write only the manifest; variants are produced on demand");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Compute Error/CE/rCE/CEC from a prediction file");
  std::string ev_predictions;
  std::string ev_manifest;
  std::string ev_format = "table";
  std::string ev_out;
  ev->add_option("predictions", ev_predictions, "Prediction CSV")->required();
  ev->add_option("--manifest", ev_manifest, "Corrupted manifest for coverage checks");
  ev->add_option("--format", ev_format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  ev->add_option("--out", ev_out, "Write the report here instead of stdout");

  // correlate
  auto* co = app.add_subcommand("correlate", "Pearson r of benchmark and validation error vs test error");
  std::string co_points;
  std::string co_format = "table";
  std::string co_out;
  std::string co_points_out;
  co->add_option("points", co_points, "CSV: label,benchmark_error,test_error[,validation_error]")
      ->required();
  co->add_option("--format", co_format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  co->add_option("--out", co_out, "Write the summary here instead of stdout");
  co->add_option("--points-out", co_points_out, "Write plot points CSV here");

  // corrupt
  auto* cr = app.add_subcommand("corrupt", "Corrupt a single PNG, or write its 9x5 gallery");
  std::string cr_image;
  std::string cr_kind;
  int cr_severity = 0;
  std::uint64_t cr_seed = 0;
  std::string cr_out;
  std::string cr_config;
  bool cr_gallery = false;
  cr->add_option("image", cr_image, "Input PNG")->required();
  cr->add_option("--kind", cr_kind, "Corruption kind");
  cr->add_option("--severity", cr_severity, "Severity 0..5")->check(CLI::Range(0, kNumSeverities));
  cr->add_option("--seed", cr_seed, "Corruption seed");
  cr->add_option("--out", cr_out, "Output PNG, or directory with --gallery")->required();
  cr->add_option("--config", cr_config, "Severity table override (JSON)");
  cr->add_flag("--gallery", cr_gallery, "Write all 45 variants as {kind}_{severity}.png");

  auto* tbl = app.add_subcommand("severity-table", "Print the effective severity table as JSON");
  std::string tbl_config;
  tbl->add_option("--config", tbl_config, "Severity table override (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen) {
      const auto manifest = harness::load_dataset_manifest(gen_manifest);
      harness::RunConfig config;
      config.seed = gen_seed;
      config.table = table_from(gen_config);
      config.out_dir = gen_out;
      config.jobs = gen_jobs;
      config.stream = gen_stream;
      std::vector<std::string> warnings;
      const auto result = harness::generate(manifest, config, gen_manifest, &warnings);
      print_warnings(warnings);
      std::cerr << "wrote " << result.entries.size() << " entries ("
                << result.failures.size() << " failed samples) to "
                << (fs::path(gen_out) / harness::kCorruptedManifestName).string() << "\n";
    } else if (*ev) {
      const auto records = harness::load_predictions(ev_predictions);
      std::optional<harness::CorruptedManifest> manifest;
      if (!ev_manifest.empty()) manifest = harness::load_corrupted_manifest(ev_manifest);
      const auto report = harness::evaluate(records, manifest ? &*manifest : nullptr);
      print_warnings(report.warnings);
      emit(harness::format_report(report, harness::parse_report_format(ev_format)), ev_out);
    } else if (*co) {
      std::ifstream in(co_points);
      if (!in) throw IoError("cannot open " + co_points);
      const auto points = harness::parse_correlation_points(in, co_points);
      const auto summary = harness::correlate(points);
      emit(harness::format_correlation(summary, harness::parse_report_format(co_format)), co_out);
      if (!co_points_out.empty()) emit(harness::correlation_points_csv(summary), co_points_out);
    } else if (*cr) {
      const SeverityTable table = table_from(cr_config);
      const RasterImage image = read_png(cr_image);
      if (cr_gallery) {
        fs::create_directories(cr_out);
        for (const CorruptionKind kind : kAllKinds) {
          for (int level = 1; level <= kNumSeverities; ++level) {
            const auto out = apply_corruption(image, {kind, Severity(level), cr_seed}, table);
            write_png(fs::path(cr_out) / (std::string(kind_name(kind)) + "_" +
                                          std::to_string(level) + ".png"),
                      out);
          }
        }
      } else {
        if (cr_kind.empty() && cr_severity != 0) {
          throw ValidationError("--kind is required unless --severity is 0 or --gallery is set");
        }
        const CorruptionKind kind = cr_kind.empty() ? CorruptionKind::Jpeg : kind_from(cr_kind);
        write_png(cr_out, apply_corruption(image, {kind, Severity(cr_severity), cr_seed}, table));
      }
    } else if (*tbl) {
      std::cout << harness::severity_table_to_json(table_from(tbl_config)).dump(2) << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const MissingBaselineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UndefinedCorrelationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return 0;
}
