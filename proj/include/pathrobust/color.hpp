#pragma once

#include <cstdint>

namespace pathrobust {

// h in [0, 360), s and v in [0, 1].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

Hsv rgb_to_hsv(Rgb8 rgb);
// Channels are rounded half-to-even on write-back.
Rgb8 hsv_to_rgb(const Hsv& hsv);

}  // namespace pathrobust
