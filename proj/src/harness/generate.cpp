#include "pathrobust/harness/generate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "pathrobust/codec.hpp"
#include "pathrobust/error.hpp"

namespace pathrobust::harness {

namespace fs = std::filesystem;

namespace {

struct SampleResult {
  std::vector<CorruptedEntry> entries;
  std::optional<GenerationFailure> failure;
};

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

SampleResult process_sample(const DatasetManifest& manifest, const DatasetEntry& entry,
                            const RunConfig& config) {
  SampleResult result;
  RasterImage image;
  try {
    image = read_png(manifest.resolve(entry));
  } catch (const Error& e) {
    result.failure = GenerationFailure{entry.sample_id, entry.image_path, e.what()};
    return result;
  }
  std::vector<RasterImage> corrupted;
  for (const CorruptionKind kind : kAllKinds) {
    for (int level = 1; level <= kNumSeverities; ++level) {
      const Severity severity(level);
      CorruptedEntry e{entry.sample_id, kind, severity, std::nullopt,
                       derive_seed(config.seed, entry.sample_id, kind, severity), entry.label};
      if (!config.stream) {
        try {
          corrupted.push_back(apply_corruption(image, {kind, severity, e.seed}, config.table));
        } catch (const ValidationError& err) {
          result.entries.clear();
          result.failure = GenerationFailure{entry.sample_id, entry.image_path, err.what()};
          return result;
        }
        e.output_path = corrupted_relative_path(entry.sample_id, kind, severity);
      }
      result.entries.push_back(std::move(e));
    }
  }
  // Nothing is written until every variant of the sample succeeded.
  for (std::size_t i = 0; i < corrupted.size(); ++i) {
    write_png(config.out_dir / *result.entries[i].output_path, corrupted[i]);
  }
  return result;
}

}  // namespace

CorruptedManifest generate(const DatasetManifest& manifest, const RunConfig& config,
                           const std::string& source_reference, std::vector<std::string>* warnings) {
  config.table.validate();
  if (config.out_dir.empty()) throw ValidationError("generate: output directory is required");
  ensure_directory(config.out_dir);
  if (!config.stream) {
    for (const CorruptionKind kind : kAllKinds) {
      for (int level = 1; level <= kNumSeverities; ++level) {
        ensure_directory(config.out_dir / std::string(kind_name(kind)) / std::to_string(level));
      }
    }
  }
  if (manifest.entries.empty() && warnings) {
    warnings->push_back("dataset manifest has no samples; writing an empty corrupted manifest");
  }

  std::vector<SampleResult> results(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= manifest.entries.size()) return;
      try {
        results[i] = process_sample(manifest, manifest.entries[i], config);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(manifest.entries.size());
        return;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(manifest.entries.size())));
  {
    std::vector<std::jthread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (fatal) std::rethrow_exception(fatal);

  CorruptedManifest out;
  out.source_manifest = source_reference;
  out.run_seed = config.seed;
  out.table = config.table;
  out.streamed = config.stream;
  out.source_samples = manifest.entries.size();
  out.base_dir = config.out_dir;
  for (auto& r : results) {
    if (r.failure) {
      if (warnings) {
        warnings->push_back("skipped " + r.failure->sample_id + ": " + r.failure->error);
      }
      out.failures.push_back(std::move(*r.failure));
    }
    for (auto& e : r.entries) out.entries.push_back(std::move(e));
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.sample_id, a.kind, a.severity) < std::tie(b.sample_id, b.kind, b.severity);
  });
  std::sort(out.failures.begin(), out.failures.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  write_corrupted_manifest(config.out_dir / kCorruptedManifestName, out);
  return out;
}

CorruptionStream::CorruptionStream(const DatasetManifest& manifest, std::uint64_t run_seed,
                                   SeverityTable table, bool include_clean)
    : manifest_(manifest), run_seed_(run_seed), table_(table), include_clean_(include_clean) {
  table_.validate();
  step_ = include_clean_ ? 0 : 1;
}

std::optional<CorruptedSample> CorruptionStream::next() {
  constexpr int kSteps = kNumKinds * kNumSeverities;
  if (sample_ >= manifest_.entries.size()) return std::nullopt;
  const DatasetEntry& entry = manifest_.entries[sample_];
  if (!current_) current_ = read_png(manifest_.resolve(entry));

  CorruptedSample out;
  out.sample_id = entry.sample_id;
  out.label = entry.label;
  if (step_ == 0) {
    out.spec = {CorruptionKind::Jpeg, Severity(0), 0};
    out.image = *current_;
  } else {
    const int k = (step_ - 1) / kNumSeverities;
    const Severity severity((step_ - 1) % kNumSeverities + 1);
    const CorruptionKind kind = kAllKinds[k];
    out.spec = {kind, severity, derive_seed(run_seed_, entry.sample_id, kind, severity)};
    out.image = apply_corruption(*current_, out.spec, table_);
  }
  if (++step_ > kSteps) {
    step_ = include_clean_ ? 0 : 1;
    ++sample_;
    current_.reset();
  }
  return out;
}

}  // namespace pathrobust::harness
