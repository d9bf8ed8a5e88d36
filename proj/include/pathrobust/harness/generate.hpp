#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathrobust/corruption.hpp"
#include "pathrobust/harness/config.hpp"
#include "pathrobust/harness/manifest.hpp"

namespace pathrobust::harness {

// Builds the 45 corrupted variants of every sample. In materialise mode the
// PNGs land under config.out_dir/{kind}/{severity}/{sample_id}.png; in
// streaming mode only the manifest is written and pixels come from
// CorruptionStream. The manifest goes to config.out_dir/manifest.jsonl.
// Undecodable inputs are recorded as failures; an unwritable output
// directory throws IoError.
CorruptedManifest generate(const DatasetManifest& manifest, const RunConfig& config,
                           const std::string& source_reference,
                           std::vector<std::string>* warnings = nullptr);

struct CorruptedSample {
  std::string sample_id;
  int label = 0;
  CorruptionSpec spec;
  RasterImage image;
};

// Lazily yields the clean image (severity 0 spec, kind Jpeg) followed by its
// 45 variants for each sample in manifest order. Decoding happens once per sample.
class CorruptionStream {
 public:
  CorruptionStream(const DatasetManifest& manifest, std::uint64_t run_seed, SeverityTable table,
                   bool include_clean = false);

  // Throws on unreadable input; the caller decides whether to skip.
  std::optional<CorruptedSample> next();

 private:
  const DatasetManifest& manifest_;
  std::uint64_t run_seed_;
  SeverityTable table_;
  bool include_clean_;
  std::size_t sample_ = 0;
  int step_ = 0;
  std::optional<RasterImage> current_;
};

}  // namespace pathrobust::harness
