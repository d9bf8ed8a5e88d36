#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pathrobust/severity.hpp"

namespace pathrobust::harness {

struct DatasetEntry {
  std::string sample_id;
  std::string image_path;  // relative to the manifest directory
  int label = 0;
};

// JSONL: a header line {"type":"dataset","name":...,"classes":[...]}
// followed by one {"type":"sample","sample_id","image_path","label"} per line.
struct DatasetManifest {
  std::string name;
  std::vector<std::string> class_names;
  std::vector<DatasetEntry> entries;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const DatasetEntry& entry) const { return base_dir / entry.image_path; }
};

// Sample ids become file names, so they must be non-empty and free of path
// separators, "..", control characters and commas.
void validate_sample_id(const std::string& id);

DatasetManifest load_dataset_manifest(const std::filesystem::path& path);
void write_dataset_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct CorruptedEntry {
  std::string sample_id;
  CorruptionKind kind = CorruptionKind::Jpeg;
  Severity severity;
  std::optional<std::string> output_path;  // relative to the manifest; empty when streamed
  std::uint64_t seed = 0;
  int label = 0;
};

struct GenerationFailure {
  std::string sample_id;
  std::string image_path;
  std::string error;
};

struct CorruptedManifest {
  std::string source_manifest;
  std::uint64_t run_seed = 0;
  SeverityTable table;
  bool streamed = false;
  std::size_t source_samples = 0;
  std::vector<CorruptedEntry> entries;  // sorted by (sample_id, kind, severity)
  std::vector<GenerationFailure> failures;
  std::filesystem::path base_dir;
};

inline constexpr const char* kCorruptedManifestFormat = "pathrobust.corrupted.v1";
inline constexpr const char* kCorruptedManifestName = "manifest.jsonl";

// Relative output location {kind}/{severity}/{sample_id}.png.
std::string corrupted_relative_path(const std::string& sample_id, CorruptionKind kind,
                                    Severity severity);

std::string serialize_corrupted_manifest(const CorruptedManifest& manifest);
void write_corrupted_manifest(const std::filesystem::path& path, const CorruptedManifest& manifest);
CorruptedManifest load_corrupted_manifest(const std::filesystem::path& path);

}  // namespace pathrobust::harness
