#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/synthetic.hpp"
#include "pathrobust/codec.hpp"
#include "pathrobust/error.hpp"
#include "pathrobust/harness/config.hpp"
#include "pathrobust/harness/correlate.hpp"
#include "pathrobust/harness/evaluate.hpp"
#include "pathrobust/harness/generate.hpp"
#include "pathrobust/rng.hpp"

using namespace pathrobust;
using namespace pathrobust::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

std::vector<PredictionRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_predictions(in, "preds.csv");
}

}  // namespace

TEST_CASE("severity table json round trip and overrides") {
  const SeverityTable defaults;
  CHECK(severity_table_from_json(severity_table_to_json(defaults)) == defaults);

  const auto overridden = severity_table_from_json(
      nlohmann::json::parse(R"({"jpeg": {"quality": [50, 40, 30, 20, 10]}})"));
  CHECK(overridden.jpeg_quality == PerLevel<int>{50, 40, 30, 20, 10});
  CHECK(overridden.hue_shift == defaults.hue_shift);

  CHECK_THROWS_AS(severity_table_from_json(nlohmann::json::parse(R"({"jpeg": {"quality": [10, 20, 30, 40, 50]}})")),
                  ValidationError);
  CHECK_THROWS_AS(severity_table_from_json(nlohmann::json::parse(R"({"hue": {"shift": [1, 2, 2, 3, 4]}})")),
                  ValidationError);
  CHECK_THROWS_AS(severity_table_from_json(nlohmann::json::parse(R"({"hue": {"shift": [1, 2, 3]}})")),
                  ValidationError);
  CHECK_THROWS_AS(severity_table_from_json(nlohmann::json::parse(R"({"fog": {}})")), ValidationError);
  CHECK_THROWS_AS(severity_table_from_json(nlohmann::json::parse(R"({"hue": {"angle": [1, 2, 3, 4, 5]}})")),
                  ValidationError);
  CHECK_THROWS_AS(
      severity_table_from_json(nlohmann::json::parse(R"({"defocus_blur": {"radius": [1.5, 2, 3, 4, 5]}})")),
      ValidationError);
  CHECK_THROWS_AS(
      severity_table_from_json(nlohmann::json::parse(R"({"mark": {"coverage": [0.1, 0.2, 0.3, 0.4, 1.5]}})")),
      ValidationError);
  CHECK_NOTHROW(defaults.validate());
}

TEST_CASE("sample ids are checked for path safety") {
  CHECK_NOTHROW(validate_sample_id("patch_001-A"));
  CHECK_THROWS_AS(validate_sample_id(""), ValidationError);
  CHECK_THROWS_AS(validate_sample_id("../x"), ValidationError);
  CHECK_THROWS_AS(validate_sample_id("a/b"), ValidationError);
  CHECK_THROWS_AS(validate_sample_id("a,b"), ValidationError);
}

TEST_CASE("dataset manifest parsing") {
  const auto dir = testing::scratch_dir("dataset_manifest");
  {
    std::ofstream out(dir / "m.jsonl");
    out << R"({"type":"dataset","name":"d","classes":["a","b"]})" << "\n"
        << R"({"type":"sample","sample_id":"x","image_path":"x.png","label":1})" << "\n\n";
  }
  const auto m = load_dataset_manifest(dir / "m.jsonl");
  CHECK(m.name == "d");
  REQUIRE(m.entries.size() == 1);
  CHECK(m.resolve(m.entries[0]) == dir / "x.png");

  {
    std::ofstream out(dir / "dup.jsonl");
    out << R"({"type":"dataset","name":"d"})" << "\n"
        << R"({"type":"sample","sample_id":"x","image_path":"x.png","label":1})" << "\n"
        << R"({"type":"sample","sample_id":"x","image_path":"y.png","label":0})" << "\n";
  }
  try {
    load_dataset_manifest(dir / "dup.jsonl");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  {
    std::ofstream out(dir / "bad.jsonl");
    out << R"({"type":"dataset"})" << "\n" << "{not json\n";
  }
  CHECK_THROWS_AS(load_dataset_manifest(dir / "bad.jsonl"), ParseError);
  CHECK_THROWS_AS(load_dataset_manifest(dir / "missing.jsonl"), IoError);
}

TEST_CASE("generate writes 45 variants per sample and a reloadable manifest") {
  const auto dir = testing::scratch_dir("generate_basic");
  const auto dataset = testing::write_two_class_dataset(dir / "data", 3, 32);
  RunConfig config;
  config.seed = 11;
  config.out_dir = dir / "out";
  const auto manifest = generate(dataset, config, "data/dataset.jsonl");
  CHECK(manifest.entries.size() == 135);
  CHECK(manifest.failures.empty());

  std::size_t pngs = 0;
  for (const auto& e : fs::recursive_directory_iterator(config.out_dir)) {
    pngs += e.path().extension() == ".png";
  }
  CHECK(pngs == 135);

  const auto reloaded = load_corrupted_manifest(config.out_dir / kCorruptedManifestName);
  CHECK(reloaded.entries.size() == 135);
  CHECK(reloaded.table == config.table);
  CHECK(reloaded.run_seed == 11);
  CHECK(reloaded.source_manifest == "data/dataset.jsonl");
  for (const auto& e : reloaded.entries) {
    REQUIRE(e.output_path.has_value());
    CHECK(*e.output_path == corrupted_relative_path(e.sample_id, e.kind, e.severity));
    const auto img = read_png(reloaded.base_dir / *e.output_path);
    CHECK(img.width() == 32);
    CHECK(e.seed == derive_seed(11, e.sample_id, e.kind, e.severity));
  }
  CHECK(serialize_corrupted_manifest(reloaded) == slurp(config.out_dir / kCorruptedManifestName));
}

TEST_CASE("generate is reproducible and independent of the worker count") {
  const auto dir = testing::scratch_dir("generate_repro");
  const auto dataset = testing::write_two_class_dataset(dir / "data", 4, 32);
  RunConfig a;
  a.seed = 3;
  a.out_dir = dir / "a";
  a.jobs = 1;
  RunConfig b = a;
  b.out_dir = dir / "b";
  b.jobs = 4;
  generate(dataset, a, "dataset.jsonl");
  generate(dataset, b, "dataset.jsonl");
  CHECK(tree(a.out_dir) == tree(b.out_dir));

  RunConfig c = a;
  c.out_dir = dir / "c";
  c.seed = 4;
  generate(dataset, c, "dataset.jsonl");
  CHECK(tree(a.out_dir) != tree(c.out_dir));
}

TEST_CASE("streaming yields the same pixels as materialised output") {
  const auto dir = testing::scratch_dir("generate_stream");
  const auto dataset = testing::write_two_class_dataset(dir / "data", 2, 32);
  RunConfig config;
  config.seed = 5;
  config.out_dir = dir / "mat";
  const auto materialised = generate(dataset, config, "d");
  RunConfig streamed_config = config;
  streamed_config.out_dir = dir / "stream";
  streamed_config.stream = true;
  const auto streamed = generate(dataset, streamed_config, "d");
  CHECK(streamed.entries.size() == 90);
  CHECK_FALSE(streamed.entries[0].output_path.has_value());
  CHECK(load_corrupted_manifest(streamed_config.out_dir / kCorruptedManifestName).streamed);

  CorruptionStream stream(dataset, config.seed, config.table, true);
  std::size_t clean = 0;
  std::size_t corrupted = 0;
  while (auto sample = stream.next()) {
    if (sample->spec.severity.clean()) {
      CHECK(sample->image == read_png(dataset.resolve(dataset.entries[clean])));
      ++clean;
      continue;
    }
    const auto path = config.out_dir /
                      corrupted_relative_path(sample->sample_id, sample->spec.kind, sample->spec.severity);
    CHECK(sample->image == read_png(path));
    ++corrupted;
  }
  CHECK(clean == 2);
  CHECK(corrupted == 90);
}

TEST_CASE("generate records unreadable inputs and continues") {
  const auto dir = testing::scratch_dir("generate_failures");
  auto dataset = testing::write_two_class_dataset(dir / "data", 2, 32);
  dataset.entries.push_back({"ghost", "images/ghost.png", 0});
  {
    std::ofstream junk(dir / "data" / "images" / "junk.png");
    junk << "not a png";
  }
  dataset.entries.push_back({"junk", "images/junk.png", 1});
  RunConfig config;
  config.out_dir = dir / "out";
  std::vector<std::string> warnings;
  const auto m = generate(dataset, config, "d", &warnings);
  CHECK(m.entries.size() == 90);
  REQUIRE(m.failures.size() == 2);
  CHECK(m.failures[0].sample_id == "ghost");
  CHECK(m.failures[1].sample_id == "junk");
  CHECK(warnings.size() == 2);
  CHECK(load_corrupted_manifest(config.out_dir / kCorruptedManifestName).failures.size() == 2);
}

TEST_CASE("generate on an empty manifest succeeds with a warning") {
  const auto dir = testing::scratch_dir("generate_empty");
  DatasetManifest empty;
  RunConfig config;
  config.out_dir = dir / "out";
  std::vector<std::string> warnings;
  const auto m = generate(empty, config, "empty.jsonl", &warnings);
  CHECK(m.entries.empty());
  CHECK(warnings.size() == 1);
  CHECK(fs::exists(config.out_dir / kCorruptedManifestName));
}

TEST_CASE("generate fails on an unwritable output directory") {
  const auto dir = testing::scratch_dir("generate_unwritable");
  const auto dataset = testing::write_two_class_dataset(dir / "data", 1, 32);
  {
    std::ofstream blocker(dir / "file");
    blocker << "x";
  }
  RunConfig config;
  config.out_dir = dir / "file" / "out";
  CHECK_THROWS_AS(generate(dataset, config, "d"), IoError);
}

TEST_CASE("prediction parsing") {
  const auto records = parse(
      "sample_id,kind,severity,true_label,pred_label,confidence\n"
      "a,clean,0,1,1,0.9\n"
      "\n"
      "a,hue,3,1,0,0.4\n");
  REQUIRE(records.size() == 2);
  CHECK(records[0].clean());
  CHECK(records[1].kind == CorruptionKind::Hue);
  CHECK(records[1].confidence == 0.4);

  // Column order is free.
  const auto reordered = parse("confidence,kind,sample_id,severity,pred_label,true_label\n0.5,mark,z,2,1,0\n");
  CHECK(reordered[0].sample_id == "z");
  CHECK(reordered[0].true_label == 0);

  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string header = "sample_id,kind,severity,true_label,pred_label,confidence\n";
  CHECK(line_of(header + "a,clean,0,1,1,0.9\na,fog,1,1,1,0.5\n") == 3);
  CHECK(line_of(header + "a,clean,0,1,1,abc\n") == 2);
  CHECK(line_of(header + "a,clean,0,1,1\n") == 2);
  CHECK(line_of(header + "a,clean,2,1,1,0.5\n") == 2);
  CHECK(line_of(header + "a,hue,7,1,1,0.5\n") == 2);
  CHECK(line_of(header + "a,hue,1,1,1,1.5\n") == 2);
  CHECK(line_of("sample_id,kind,severity\n") == 1);
  CHECK(line_of("") == 1);
}

TEST_CASE("evaluate on a hand-written 46-row prediction file") {
  // One sample: clean correct; corrupted rows wrong exactly when severity >= 4,
  // plus every mark row wrong. Confidence falls with severity except for hue,
  // where it rises.
  std::ostringstream csv;
  csv << "sample_id,kind,severity,true_label,pred_label,confidence\n";
  csv << "p1,clean,0,1,1,0.95\n";
  for (const auto kind : kAllKinds) {
    for (int s = 1; s <= 5; ++s) {
      const bool wrong = s >= 4 || kind == CorruptionKind::Mark;
      const double conf = kind == CorruptionKind::Hue ? 0.95 + 0.01 * s : 0.95 - 0.1 * s;
      csv << "p1," << kind_name(kind) << "," << s << ",1," << (wrong ? 0 : 1) << "," << conf << "\n";
    }
  }
  const auto records = parse(csv.str());
  REQUIRE(records.size() == 46);
  const auto report = evaluate(records);
  // 8 kinds with 2/5 wrong, mark 5/5 wrong: (8 * 2 + 5) / 45.
  CHECK(*report.ce == doctest::Approx(21.0 / 45.0).epsilon(1e-14));
  CHECK(*report.clean_error == 0.0);
  CHECK_FALSE(report.rce.has_value());
  // Hue sequence fully ascending: 15 swaps; all others 0. CEC = 15 / (9 * 15).
  CHECK(*report.cec == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(*report.per_kind[kind_index(CorruptionKind::Hue)].cec == 1.0);
  CHECK(*report.per_kind[kind_index(CorruptionKind::Mark)].ce == 1.0);
  CHECK(*report.per_kind[kind_index(CorruptionKind::Jpeg)].ce == 0.4);
}

TEST_CASE("evaluate reports coverage gaps against the manifest") {
  CorruptedManifest m;
  for (const std::string id : {"a", "b"})
    for (const auto kind : kAllKinds)
      for (int s = 1; s <= 5; ++s) m.entries.push_back({id, kind, Severity(s), std::nullopt, 0, 0});

  std::vector<PredictionRecord> records;
  for (const std::string id : {"a", "b"}) {
    records.push_back({id, std::nullopt, Severity(0), 0, id == "a" ? 1 : 0, 0.9});
    for (const auto kind : kAllKinds)
      for (int s = 1; s <= 5; ++s) records.push_back({id, kind, Severity(s), 0, 0, 0.5});
  }
  const auto full = evaluate(records, &m);
  for (const auto& w : full.warnings) MESSAGE(w);
  CHECK(full.warnings.empty());

  std::erase_if(records, [](const auto& r) { return r.sample_id == "b" && r.kind == CorruptionKind::Hue && r.severity == Severity(3); });
  const auto report = evaluate(records, &m);
  CHECK(report.ce.has_value());
  bool gap = false;
  bool count = false;
  for (const auto& w : report.warnings) {
    gap |= w.find("b/hue/3") != std::string::npos;
    count |= w.find("(hue, 3) has 1 predictions, manifest lists 2") != std::string::npos;
  }
  CHECK(gap);
  CHECK(count);
}

TEST_CASE("report formats") {
  std::vector<PredictionRecord> records;
  records.push_back({"a", std::nullopt, Severity(0), 0, 1, 0.9});
  records.push_back({"a", CorruptionKind::Hue, Severity(1), 0, 0, 0.9});
  const auto report = evaluate(records);
  const auto table = format_report(report, ReportFormat::Table);
  CHECK(table.find("CE     null") != std::string::npos);
  const auto csv = format_report(report, ReportFormat::Csv);
  CHECK(csv.find("error,clean,0,1.000000,1") != std::string::npos);
  CHECK(csv.find("error,hue,1,0.000000,1") != std::string::npos);
  const auto json = nlohmann::json::parse(format_report(report, ReportFormat::Json));
  CHECK(json["error"] == 1.0);
  CHECK(json["ce"].is_null());
  CHECK(json["missing_cells"].size() == 44);
  CHECK(json["per_kind"][6]["error"][0] == 0.0);
  CHECK_THROWS_AS(parse_report_format("xml"), ValidationError);
}

TEST_CASE("correlate") {
  std::istringstream in(
      "label,benchmark_error,test_error,validation_error\n"
      "m1,0.2,0.3,0.1\n"
      "m2,0.4,0.5,0.1\n"
      "m3,0.3,0.4,0.2\n");
  const auto points = parse_correlation_points(in, "p.csv");
  REQUIRE(points.size() == 3);
  const auto summary = correlate(points);
  CHECK(summary.benchmark_vs_test == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(summary.validation_vs_test.has_value());
  const auto csv = correlation_points_csv(summary);
  CHECK(csv.rfind("label,validation_error,benchmark_error,test_error\n", 0) == 0);
  CHECK(csv.find("m2,0.1,0.4,0.5") != std::string::npos);

  std::istringstream flat("label,benchmark_error,test_error\na,0.2,0.3\nb,0.2,0.4\n");
  CHECK_THROWS_AS(correlate(parse_correlation_points(flat, "f.csv")), UndefinedCorrelationError);
  std::istringstream one("label,benchmark_error,test_error\na,0.2,0.3\n");
  CHECK_THROWS_AS(correlate(parse_correlation_points(one, "o.csv")), ValidationError);
  std::istringstream bad("label,benchmark_error,test_error\na,x,0.3\n");
  CHECK_THROWS_AS(parse_correlation_points(bad, "b.csv"), ParseError);

  // Without a validation column only the benchmark series is reported.
  std::istringstream no_val("label,benchmark_error,test_error\na,0.1,0.3\nb,0.2,0.1\nc,0.3,0.2\n");
  const auto s = correlate(parse_correlation_points(no_val, "n.csv"));
  CHECK_FALSE(s.validation_vs_test.has_value());
  CHECK(format_correlation(s, ReportFormat::Table).find("null") != std::string::npos);
}

TEST_CASE("correlate recovers a planted correlation on average") {
  // y = rho * x + sqrt(1 - rho^2) * e has population correlation rho.
  Rng rng(31);
  const double rho = 0.8;
  double mean_r = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<CorrelationPoint> points;
    for (int i = 0; i < 30; ++i) {
      const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform(), u4 = rng.uniform();
      const double x = std::sqrt(-2 * std::log1p(-u1)) * std::cos(2 * M_PI * u2);
      const double e = std::sqrt(-2 * std::log1p(-u3)) * std::cos(2 * M_PI * u4);
      points.push_back({"p" + std::to_string(i), x, std::nullopt, rho * x + std::sqrt(1 - rho * rho) * e});
    }
    mean_r += correlate(points).benchmark_vs_test / 200.0;
  }
  CHECK(std::abs(mean_r - rho) < 0.03);
}
