#include "pathrobust/color.hpp"

#include <algorithm>
#include <cmath>

#include "pathrobust/image.hpp"

namespace pathrobust {

Hsv rgb_to_hsv(Rgb8 rgb) {
  const double r = rgb.r / 255.0;
  const double g = rgb.g / 255.0;
  const double b = rgb.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double chroma = mx - mn;

  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? chroma / mx : 0.0;
  if (chroma <= 0.0) return out;

  double h;
  if (mx == r) {
    h = (g - b) / chroma;
  } else if (mx == g) {
    h = 2.0 + (b - r) / chroma;
  } else {
    h = 4.0 + (r - g) / chroma;
  }
  h *= 60.0;
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

Rgb8 hsv_to_rgb(const Hsv& hsv) {
  const double v = std::clamp(hsv.v, 0.0, 1.0);
  const double s = std::clamp(hsv.s, 0.0, 1.0);
  double h = std::fmod(hsv.h, 360.0);
  if (h < 0.0) h += 360.0;

  const double hp = h / 60.0;
  const int sector = std::min(static_cast<int>(hp), 5);
  const double f = hp - sector;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));

  double r, g, b;
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  return {to_u8(r * 255.0), to_u8(g * 255.0), to_u8(b * 255.0)};
}

}  // namespace pathrobust
