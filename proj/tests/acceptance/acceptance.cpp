// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"
#include "pathrobust/codec.hpp"
#include "pathrobust/color.hpp"
#include "pathrobust/corruption.hpp"
#include "pathrobust/harness/correlate.hpp"
#include "pathrobust/harness/evaluate.hpp"
#include "pathrobust/harness/generate.hpp"
#include "pathrobust/kernel.hpp"
#include "pathrobust/metrics.hpp"
#include "pathrobust/rng.hpp"

using namespace pathrobust;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

void fail(Outcome& o, const std::string& why) {
  o.pass = false;
  std::printf("    - %s\n", why.c_str());
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// --- published results table ---------------------------------------------------

struct TableRow {
  const char* model;
  const char* dataset;
  double error;
  double ce;
  double printed_rce;
};

// Error(%), CE(%) and rCE as printed, both datasets. The three vision
// transformers have no PatchCamelyon entries.
constexpr std::array<TableRow, 23> kPublished = {{
    {"AlexNet", "PatchCamelyon", 14.94, 26.87, 1.80},
    {"VGG16", "PatchCamelyon", 10.34, 23.16, 2.24},
    {"ResNet18", "PatchCamelyon", 11.12, 24.84, 2.23},
    {"ResNet34", "PatchCamelyon", 11.22, 23.60, 2.10},
    {"ResNet50", "PatchCamelyon", 12.54, 28.84, 2.30},
    {"ResNet101", "PatchCamelyon", 12.00, 25.15, 2.09},
    {"MobileNetV2", "PatchCamelyon", 9.68, 26.60, 2.75},
    {"ShuffleNet", "PatchCamelyon", 13.53, 26.15, 1.93},
    {"EfficientNetb0", "PatchCamelyon", 10.76, 26.19, 2.43},
    {"EfficientNetb7", "PatchCamelyon", 10.39, 24.89, 2.39},
    {"AlexNet", "LocalTCT", 16.06, 30.64, 1.91},
    {"VGG16", "LocalTCT", 13.51, 30.24, 2.24},
    {"ResNet18", "LocalTCT", 13.23, 30.48, 2.30},
    {"ResNet34", "LocalTCT", 12.92, 28.38, 2.20},
    {"ResNet50", "LocalTCT", 12.96, 31.61, 2.44},
    {"ResNet101", "LocalTCT", 13.25, 29.64, 2.24},
    {"MobileNetV2", "LocalTCT", 12.81, 30.24, 2.36},
    {"ShuffleNet", "LocalTCT", 14.53, 32.91, 2.26},
    {"EfficientNetb0", "LocalTCT", 12.96, 30.51, 2.35},
    {"EfficientNetb7", "LocalTCT", 12.56, 26.36, 2.10},
    {"ViT", "LocalTCT", 15.30, 30.91, 2.02},
    {"SwinTransformer", "LocalTCT", 13.00, 28.47, 2.19},
    {"DeiT", "LocalTCT", 13.85, 27.81, 2.01},
}};

Outcome published_table_consistency() {
  Outcome o;
  constexpr double kTolerance = 0.005;
  int ok = 0;
  for (const auto& row : kPublished) {
    const double rce = relative_ce(row.ce, row.error);
    const double diff = std::abs(rce - row.printed_rce);
    // Printed inputs are rounded to 0.01, so the true ratio lies in this interval.
    const double lo = (row.ce - 0.005) / (row.error + 0.005);
    const double hi = (row.ce + 0.005) / (row.error - 0.005);
    const bool within = diff <= kTolerance;
    ok += within;
    std::printf("    %-16s %-14s CE/Error = %.4f printed %.2f |diff| %.4f %s  (rounding interval [%.4f, %.4f])\n",
                row.model, row.dataset, rce, row.printed_rce, diff, within ? "ok" : "OUT OF TOLERANCE",
                lo, hi);
    if (!within) o.pass = false;
  }
  o.detail = std::to_string(ok) + "/" + std::to_string(kPublished.size()) + " printed rCE values within ±0.005";
  return o;
}

// --- corruption suites ---------------------------------------------------------

constexpr int kCorpusSize = 20;
constexpr int kImageSide = 64;
constexpr std::uint64_t kRunSeed = 20220;

std::string sample_id(int i) { return "desk" + std::to_string(i); }

Outcome corruption_invariants() {
  Outcome o;
  const auto corpus = testing::desk_corpus(kCorpusSize, kImageSide);
  int checks = 0;
  for (int i = 0; i < kCorpusSize; ++i) {
    const auto& img = corpus[i];
    for (const auto kind : kAllKinds) {
      for (int s = 0; s <= kNumSeverities; ++s) {
        const Severity sev(s);
        const CorruptionSpec spec{kind, sev, derive_seed(kRunSeed, sample_id(i), kind, sev)};
        const auto a = apply_corruption(img, spec);
        const auto b = apply_corruption(img, spec);
        const std::string where = sample_id(i) + "/" + std::string(kind_name(kind)) + "/" + std::to_string(s);
        if (s == 0 && a != img) fail(o, "identity violated at " + where);
        if (a.width() != img.width() || a.height() != img.height()) fail(o, "shape changed at " + where);
        if (a.pixels().size() != static_cast<std::size_t>(a.width()) * a.height() * 3) {
          fail(o, "buffer length invalid at " + where);
        }
        if (a != b) fail(o, "non-deterministic output at " + where);
        // 8-bit validity: the PNG interchange path reproduces the buffer exactly.
        if (decode_png(encode_png(a)) != a) fail(o, "8-bit round trip failed at " + where);
        ++checks;
      }
    }
  }
  o.detail = std::to_string(checks) + " (image, kind, severity) triples on " +
             std::to_string(kCorpusSize) + " images";
  return o;
}

Outcome monotone_degradation() {
  Outcome o;
  const auto corpus = testing::desk_corpus(kCorpusSize, kImageSide);
  constexpr int kOverlaySeeds = 10;
  for (const auto kind : kAllKinds) {
    const bool overlay = kind == CorruptionKind::Mark || kind == CorruptionKind::Bubble;
    const int seeds = overlay ? kOverlaySeeds : 1;
    std::array<double, kNumSeverities> mean{};
    for (int s = 1; s <= kNumSeverities; ++s) {
      double total = 0.0;
      int n = 0;
      for (int r = 0; r < seeds; ++r) {
        for (int i = 0; i < kCorpusSize; ++i) {
          const Severity sev(s);
          const CorruptionSpec spec{kind, sev, derive_seed(kRunSeed + r, sample_id(i), kind, sev)};
          total += psnr(apply_corruption(corpus[i], spec), corpus[i]);
          ++n;
        }
      }
      mean[s - 1] = total / n;
    }
    bool strict = true;
    for (int s = 1; s < kNumSeverities; ++s) strict &= mean[s] < mean[s - 1];
    std::printf("    %-13s mean PSNR dB s1..s5: %7.3f %7.3f %7.3f %7.3f %7.3f  %s\n",
                std::string(kind_name(kind)).c_str(), mean[0], mean[1], mean[2], mean[3], mean[4],
                strict ? "strictly decreasing" : "NOT MONOTONE");
    if (!strict) o.pass = false;
  }
  o.detail = "all 9 kinds checked on " + std::to_string(kCorpusSize) + " images (mark/bubble over " +
             std::to_string(kOverlaySeeds) + " seeds)";
  return o;
}

// --- oracle equivalence --------------------------------------------------------

Outcome oracle_equivalence() {
  Outcome o;
  Rng rng(16161);
  int conv_trials = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto img = testing::noise_image(16, 16, rng.next_u64());
    std::vector<ConvolutionKernel> kernels;
    for (const int size : {1, 3, 5}) {
      std::vector<double> w(size * size);
      double total = 0.0;
      for (auto& v : w) total += (v = rng.uniform());
      for (auto& v : w) v /= total;
      kernels.emplace_back(size, w);
    }
    kernels.push_back(build_defocus_kernel(rng.uniform_int(1, 2)));
    kernels.push_back(build_motion_kernel(rng.uniform_int(1, 5), rng.uniform(0.0, 180.0)));
    for (const auto& k : kernels) {
      if (convolve(img, k) != testing::convolve_oracle(img, k)) fail(o, "convolve mismatch in trial " + std::to_string(trial));
      ++conv_trials;
    }
  }

  std::array<double, 6> v = {0.05, 0.2, 0.35, 0.5, 0.65, 0.8};
  int perms = 0;
  do {
    ConfidenceSequence seq{"p", CorruptionKind::Jpeg, {}};
    for (int i = 0; i < 6; ++i) seq.values[i] = v[i];
    if (kendall_swaps(seq) != testing::discordant_pairs(v)) fail(o, "kendall mismatch on a permutation");
    ++perms;
  } while (std::next_permutation(v.begin(), v.end()));

  int tied = 0;
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 6> t;
    for (auto& x : t) x = rng.uniform_int(0, 3) * 0.25;
    ConfidenceSequence seq{"t", CorruptionKind::Jpeg, {}};
    for (int j = 0; j < 6; ++j) seq.values[j] = t[j];
    if (kendall_swaps(seq) != testing::discordant_pairs(t)) fail(o, "kendall mismatch on a tied sequence");
    ++tied;
  }
  if (perms != 720) fail(o, "expected 720 permutations");
  o.detail = std::to_string(conv_trials) + " convolutions (100 random 16x16 images), " +
             std::to_string(perms) + " permutations, " + std::to_string(tied) + " tied sequences";
  return o;
}

// --- CEC -----------------------------------------------------------------------

Outcome cec_endpoints() {
  Outcome o;
  auto make = [](std::array<double, 6> v) {
    ConfidenceSequence s{"x", CorruptionKind::Hue, {}};
    for (int i = 0; i < 6; ++i) s.values[i] = v[i];
    return s;
  };
  const std::vector<ConfidenceSequence> desc(100, make({0.99, 0.9, 0.8, 0.7, 0.6, 0.5}));
  const std::vector<ConfidenceSequence> asc(100, make({0.5, 0.6, 0.7, 0.8, 0.9, 0.99}));
  const double c_desc = cec(desc);
  const double c_asc = cec(asc);
  Rng rng(555);
  std::vector<ConfidenceSequence> random;
  for (int i = 0; i < 10000; ++i) {
    std::array<double, 6> v;
    for (auto& x : v) x = rng.uniform();
    random.push_back(make(v));
  }
  const double c_rand = cec(random);
  if (c_desc != 0.0) fail(o, "descending CEC " + fmt("%.6f", c_desc));
  if (c_asc != 1.0) fail(o, "ascending CEC " + fmt("%.6f", c_asc));
  if (std::abs(c_rand - 0.5) > 0.02) fail(o, "uniform CEC " + fmt("%.6f", c_rand));
  o.detail = "descending " + fmt("%.3f", c_desc) + ", ascending " + fmt("%.3f", c_asc) +
             ", 10k uniform " + fmt("%.4f", c_rand) + " (target 0.5 ± 0.02)";
  return o;
}

// --- end-to-end ------------------------------------------------------------------

struct ToyPrediction {
  int label;
  double confidence;
};

// Mean HSV value, thresholded halfway between the two class brightnesses.
ToyPrediction brightness_classifier(const RasterImage& img) {
  double sum = 0.0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      sum += std::max({img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2)}) / 255.0;
  const double mean = sum / static_cast<double>(img.pixel_count());
  constexpr double kThreshold = 0.64;
  return {mean > kThreshold ? 1 : 0, 0.5 + 0.5 * std::tanh(10.0 * std::abs(mean - kThreshold))};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

struct PipelineRun {
  std::string report;
  std::map<std::string, std::string> tree;
  RobustnessReport parsed;
};

PipelineRun run_pipeline(const harness::DatasetManifest& dataset, const fs::path& out, int jobs) {
  harness::RunConfig config;
  config.seed = 77;
  config.out_dir = out / "corrupted";
  config.jobs = jobs;
  const auto manifest = harness::generate(dataset, config, "dataset.jsonl");

  std::vector<PredictionRecord> records;
  for (const auto& e : dataset.entries) {
    const auto p = brightness_classifier(read_png(dataset.resolve(e)));
    records.push_back({e.sample_id, std::nullopt, Severity(0), e.label, p.label, p.confidence});
  }
  const auto reloaded = harness::load_corrupted_manifest(config.out_dir / harness::kCorruptedManifestName);
  for (const auto& e : reloaded.entries) {
    const auto p = brightness_classifier(read_png(reloaded.base_dir / *e.output_path));
    records.push_back({e.sample_id, e.kind, e.severity, e.label, p.label, p.confidence});
  }
  // Through the prediction file format, as a user would.
  {
    std::ofstream preds(out / "predictions.csv", std::ios::trunc);
    harness::write_predictions(preds, records);
  }
  const auto parsed_records = harness::load_predictions(out / "predictions.csv");
  PipelineRun run;
  run.parsed = harness::evaluate(parsed_records, &reloaded);
  run.report = harness::format_report(run.parsed, harness::ReportFormat::Json);
  run.tree = tree(config.out_dir);
  return run;
}

Outcome end_to_end() {
  Outcome o;
  const auto root = testing::scratch_dir("acceptance_e2e");
  const auto dataset = testing::write_two_class_dataset(root / "data", 10, 48);
  const auto a = run_pipeline(dataset, root / "run_a", 1);
  const auto b = run_pipeline(dataset, root / "run_b", 1);
  const auto c = run_pipeline(dataset, root / "run_c", 8);
  if (a.tree.size() != 10 * 45 + 1) fail(o, "expected 450 images plus the manifest, got " + std::to_string(a.tree.size()));
  if (!a.parsed.ce || !a.parsed.clean_error) {
    fail(o, "report lacks CE or clean error");
    return o;
  }
  if (!(*a.parsed.ce >= *a.parsed.clean_error)) fail(o, "CE below clean error");
  for (const auto& w : a.parsed.warnings) {
    const bool coverage = w.find("prediction") != std::string::npos || w.find("manifest") != std::string::npos;
    if (coverage) fail(o, "unexpected coverage warning: " + w);
  }
  if (a.report != b.report) fail(o, "report differs between identical runs");
  if (a.report != c.report) fail(o, "report differs between --jobs 1 and --jobs 8");
  if (a.tree != b.tree) fail(o, "corrupted tree differs between identical runs");
  if (a.tree != c.tree) fail(o, "corrupted tree differs between --jobs 1 and --jobs 8");
  const double brightness_ce = a.parsed.per_kind[kind_index(CorruptionKind::Brightness)].ce.value_or(-1);
  o.detail = "clean Error " + fmt("%.4f", *a.parsed.clean_error) + ", CE " + fmt("%.4f", *a.parsed.ce) +
             ", brightness CE " + fmt("%.4f", brightness_ce) + ", CEC " + fmt("%.4f", a.parsed.cec.value_or(-1)) +
             "; report and tree byte-identical across runs and --jobs 1/8";
  return o;
}

// --- correlation mechanism ------------------------------------------------------

double gaussian(Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Outcome correlation_mechanism() {
  Outcome o;
  constexpr double kPlanted = 0.45;
  constexpr int kPoints = 30;
  constexpr int kRepetitions = 100;
  constexpr double kTolerance = 0.1;
  // test = benchmark + noise has correlation sd_b / sqrt(sd_b^2 + sd_n^2).
  constexpr double kBenchSd = 0.02;
  const double noise_sd = kBenchSd * std::sqrt(1.0 / (kPlanted * kPlanted) - 1.0);
  Rng rng(3030);
  double sum = 0.0;
  double sum_val = 0.0;
  double lo = 1.0;
  double hi = -1.0;
  for (int rep = 0; rep < kRepetitions; ++rep) {
    std::ostringstream csv;
    csv << "label,validation_error,benchmark_error,test_error\n";
    for (int i = 0; i < kPoints; ++i) {
      const double bench = 0.25 + kBenchSd * gaussian(rng);
      const double test = bench - 0.1 + noise_sd * gaussian(rng);
      const double val = 0.12 + 0.01 * gaussian(rng);
      char line[160];
      std::snprintf(line, sizeof(line), "ckpt%02d,%.17g,%.17g,%.17g\n", i, val, bench, test);
      csv << line;
    }
    std::istringstream in(csv.str());
    const auto summary = harness::correlate(harness::parse_correlation_points(in, "synthetic"));
    sum += summary.benchmark_vs_test;
    sum_val += summary.validation_vs_test.value_or(0.0);
    lo = std::min(lo, summary.benchmark_vs_test);
    hi = std::max(hi, summary.benchmark_vs_test);
  }
  const double mean = sum / kRepetitions;
  if (std::abs(mean - kPlanted) > kTolerance) fail(o, "mean r " + fmt("%.4f", mean) + " outside 0.45 ± 0.1");
  o.detail = "mean r(benchmark, test) " + fmt("%.4f", mean) + " over 100 x 30 points (range " + fmt("%.3f", lo) +
             ".." + fmt("%.3f", hi) + "); uncorrelated validation series mean r " + fmt("%.4f", sum_val / kRepetitions);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"Published table arithmetic (printed rCE = CE / Error, ±0.005)", 1.0, published_table_consistency},
      {"Corruption invariants (identity, shape, determinism, 8-bit) 9x5 on 20 images", 30.0, corruption_invariants},
      {"Monotone degradation (mean PSNR strictly decreasing s1..s5)", 120.0, monotone_degradation},
      {"Oracle equivalence (convolve, kendall_swaps)", 60.0, oracle_equivalence},
      {"CEC endpoints and expectation", 10.0, cec_endpoints},
      {"End-to-end desk pipeline (10 images, 2 classes, --jobs 1 vs 8)", 60.0, end_to_end},
      {"Correlation mechanism (planted r = 0.45, 30 points, 100 reps, ±0.1)", 10.0, correlation_mechanism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::printf("[....] %s\n", c.name.c_str());
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += " (runtime budget exceeded)";
    }
    std::printf("[%s] %s: %s [%.2fs / %.0fs budget]\n", outcome.pass ? "PASS" : "FAIL", c.name.c_str(),
                outcome.detail.c_str(), seconds, c.budget_seconds);
    failures += !outcome.pass;
  }
  std::printf("\n%zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
