#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "pathrobust/severity.hpp"

namespace pathrobust::harness {

// Config schema, one object per kind with 5-element arrays:
//   {"jpeg": {"quality": [...]}, "pixelate": {"factor": [...]},
//    "defocus_blur": {"radius": [...]}, "motion_blur": {"length": [...]},
//    "brightness": {"delta": [...]}, "saturation": {"delta": [...]},
//    "hue": {"shift": [...]},
//    "mark": {"coverage": [...], "opacity": [...]}, "bubble": {...}}
nlohmann::json severity_table_to_json(const SeverityTable& table);

// Fields absent from `config` keep their value from `base`. The merged table
// is validated; unknown kinds or fields are rejected.
SeverityTable severity_table_from_json(const nlohmann::json& config,
                                       const SeverityTable& base = SeverityTable::defaults());

SeverityTable load_severity_table(const std::filesystem::path& path);

struct RunConfig {
  std::uint64_t seed = 0;
  SeverityTable table;
  std::filesystem::path out_dir;
  int jobs = 1;
  bool stream = false;
};

}  // namespace pathrobust::harness
