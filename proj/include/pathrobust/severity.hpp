#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pathrobust {

enum class CorruptionKind : std::uint8_t {
  Jpeg,
  Pixelate,
  DefocusBlur,
  MotionBlur,
  Brightness,
  Saturation,
  Hue,
  Mark,
  Bubble,
};

inline constexpr int kNumKinds = 9;
inline constexpr int kNumSeverities = 5;

inline constexpr std::array<CorruptionKind, kNumKinds> kAllKinds = {
    CorruptionKind::Jpeg,       CorruptionKind::Pixelate,   CorruptionKind::DefocusBlur,
    CorruptionKind::MotionBlur, CorruptionKind::Brightness, CorruptionKind::Saturation,
    CorruptionKind::Hue,        CorruptionKind::Mark,       CorruptionKind::Bubble,
};

constexpr int kind_index(CorruptionKind kind) { return static_cast<int>(kind); }

// Stable snake_case name, used in paths, manifests and prediction files.
std::string_view kind_name(CorruptionKind kind);
std::optional<CorruptionKind> parse_kind(std::string_view name);

// Severity level 0..5; 0 is the clean image.
class Severity {
 public:
  constexpr Severity() = default;
  // Throws ValidationError outside [0, 5].
  explicit Severity(int level);

  constexpr int level() const { return level_; }
  constexpr bool clean() const { return level_ == 0; }
  friend constexpr auto operator<=>(Severity, Severity) = default;

 private:
  int level_ = 0;
};

template <typename T>
using PerLevel = std::array<T, kNumSeverities>;

struct OverlayLevels {
  PerLevel<double> coverage;
  PerLevel<double> opacity;

  friend bool operator==(const OverlayLevels&, const OverlayLevels&) = default;
};

// Parameters for severities 1..5 (index 0 is severity 1).
struct SeverityTable {
  PerLevel<int> jpeg_quality{30, 20, 15, 10, 7};
  PerLevel<double> pixelate_factor{1.5, 2.0, 3.0, 4.0, 6.0};
  PerLevel<int> defocus_radius{1, 2, 3, 5, 7};
  PerLevel<int> motion_length{3, 5, 9, 13, 17};
  // Magnitudes; the sign is drawn from the corruption seed.
  PerLevel<double> brightness_delta{0.1, 0.2, 0.3, 0.4, 0.5};
  PerLevel<double> saturation_delta{0.1, 0.2, 0.3, 0.4, 0.5};
  PerLevel<double> hue_shift{9.0, 18.0, 27.0, 36.0, 45.0};
  OverlayLevels mark{{0.05, 0.10, 0.18, 0.28, 0.40}, {0.3, 0.4, 0.55, 0.7, 0.85}};
  OverlayLevels bubble{{0.05, 0.10, 0.18, 0.28, 0.40}, {0.3, 0.4, 0.55, 0.7, 0.85}};

  static SeverityTable defaults() { return {}; }

  // Range checks plus strict monotonicity of every distortion parameter.
  // Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const SeverityTable&, const SeverityTable&) = default;
};

}  // namespace pathrobust
