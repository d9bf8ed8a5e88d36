#include "pathrobust/severity.hpp"

#include <string>

#include "pathrobust/error.hpp"

namespace pathrobust {

namespace {

constexpr std::array<std::string_view, kNumKinds> kKindNames = {
    "jpeg", "pixelate", "defocus_blur", "motion_blur", "brightness",
    "saturation", "hue", "mark", "bubble",
};

template <typename T>
void require_increasing(const PerLevel<T>& v, const char* field) {
  for (int i = 1; i < kNumSeverities; ++i) {
    if (!(v[i] > v[i - 1])) {
      throw ValidationError(std::string("severity table: ") + field +
                            " must be strictly increasing across levels 1..5");
    }
  }
}

template <typename T>
void require_range(const PerLevel<T>& v, double lo, double hi, bool lo_open, const char* field) {
  for (const T x : v) {
    const bool ok_lo = lo_open ? x > lo : x >= lo;
    if (!ok_lo || x > hi) {
      throw ValidationError(std::string("severity table: ") + field + " value " +
                            std::to_string(x) + " out of range");
    }
  }
}

void validate_overlay(const OverlayLevels& levels, const char* coverage, const char* opacity) {
  require_range(levels.coverage, 0.0, 1.0, true, coverage);
  require_range(levels.opacity, 0.0, 1.0, true, opacity);
  require_increasing(levels.coverage, coverage);
  for (int i = 1; i < kNumSeverities; ++i) {
    if (levels.opacity[i] < levels.opacity[i - 1]) {
      throw ValidationError(std::string("severity table: ") + opacity +
                            " must not decrease across levels 1..5");
    }
  }
}

}  // namespace

std::string_view kind_name(CorruptionKind kind) { return kKindNames[kind_index(kind)]; }

std::optional<CorruptionKind> parse_kind(std::string_view name) {
  for (const CorruptionKind kind : kAllKinds) {
    if (kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

Severity::Severity(int level) : level_(level) {
  if (level < 0 || level > kNumSeverities) {
    throw ValidationError("severity must be in [0, 5], got " + std::to_string(level));
  }
}

void SeverityTable::validate() const {
  PerLevel<int> inverted_quality;
  for (int i = 0; i < kNumSeverities; ++i) inverted_quality[i] = -jpeg_quality[i];
  require_range(jpeg_quality, 1, 100, false, "jpeg.quality");
  require_increasing(inverted_quality, "jpeg.quality (negated)");

  require_range(pixelate_factor, 1.0, 1e9, true, "pixelate.factor");
  require_increasing(pixelate_factor, "pixelate.factor");

  require_range(defocus_radius, 1, 1 << 12, false, "defocus_blur.radius");
  require_increasing(defocus_radius, "defocus_blur.radius");

  require_range(motion_length, 1, 1 << 12, false, "motion_blur.length");
  require_increasing(motion_length, "motion_blur.length");

  require_range(brightness_delta, 0.0, 1.0, true, "brightness.delta");
  require_increasing(brightness_delta, "brightness.delta");
  require_range(saturation_delta, 0.0, 1.0, true, "saturation.delta");
  require_increasing(saturation_delta, "saturation.delta");
  require_range(hue_shift, 0.0, 180.0, true, "hue.shift");
  require_increasing(hue_shift, "hue.shift");

  validate_overlay(mark, "mark.coverage", "mark.opacity");
  validate_overlay(bubble, "bubble.coverage", "bubble.opacity");
}

}  // namespace pathrobust
