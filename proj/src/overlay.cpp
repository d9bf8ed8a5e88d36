#include "pathrobust/overlay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "pathrobust/error.hpp"
#include "pathrobust/rng.hpp"

namespace pathrobust {

namespace {

constexpr int kMaxStamps = 4096;

struct Ink {
  std::uint8_t r, g, b;
};

// Common marker-pen colours on glass slides.
constexpr std::array<Ink, 4> kInks = {{
    {28, 58, 168},   // blue
    {22, 122, 58},   // green
    {34, 30, 38},    // black
    {150, 28, 40},   // red
}};

double smoothstep(double edge0, double edge1, double x) {
  const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

void put(OverlayAsset& a, int x, int y, Ink ink, double alpha) {
  const std::size_t i = (static_cast<std::size_t>(y) * a.width + x) * 4;
  a.rgba[i + 0] = ink.r;
  a.rgba[i + 1] = ink.g;
  a.rgba[i + 2] = ink.b;
  a.rgba[i + 3] = to_u8(std::clamp(alpha, 0.0, 1.0) * 255.0);
}

}  // namespace

void validate_asset(const OverlayAsset& asset) {
  if (asset.width <= 0 || asset.height <= 0) {
    throw ValidationError("overlay asset dimensions must be positive");
  }
  if (asset.rgba.size() != static_cast<std::size_t>(asset.width) * asset.height * 4) {
    throw ValidationError("overlay asset buffer length does not match width*height*4");
  }
}

OverlayAsset make_mark_asset(int width, int height, std::uint64_t seed) {
  if (width < 1 || height < 1) throw ValidationError("mark asset dimensions must be positive");
  Rng rng(seed);
  OverlayAsset a{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 4, 0)};
  const Ink ink = kInks[rng.uniform_int(0, static_cast<int>(kInks.size()) - 1)];
  const double peak = rng.uniform(0.75, 1.0);
  const double cycles = rng.uniform(0.3, 1.2);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const bool vertical = height > width;

  const int along = vertical ? height : width;
  const int across = vertical ? width : height;
  const double thickness = std::max(1.0, 0.22 * across);
  const double amp = 0.2 * across;
  for (int u = 0; u < along; ++u) {
    const double centre =
        across / 2.0 + amp * std::sin(2.0 * std::numbers::pi * cycles * u / along + phase);
    for (int v = 0; v < across; ++v) {
      const double d = std::abs(v + 0.5 - centre);
      const double alpha = peak * (1.0 - smoothstep(thickness * 0.6, thickness, d));
      if (alpha <= 0.0) continue;
      if (vertical) {
        put(a, v, u, ink, alpha);
      } else {
        put(a, u, v, ink, alpha);
      }
    }
  }
  return a;
}

OverlayAsset make_bubble_asset(int diameter, std::uint64_t seed) {
  if (diameter < 1) throw ValidationError("bubble diameter must be positive");
  Rng rng(seed);
  OverlayAsset a{diameter, diameter,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(diameter) * diameter * 4, 0)};
  const double r = diameter / 2.0;
  const double rim = rng.uniform(0.72, 0.85);
  const Ink interior{246, 246, 250};
  const Ink edge{58, 58, 70};
  const double hx = r + rng.uniform(-0.35, -0.15) * r;
  const double hy = r + rng.uniform(-0.35, -0.15) * r;
  for (int y = 0; y < diameter; ++y) {
    for (int x = 0; x < diameter; ++x) {
      const double dx = x + 0.5 - r;
      const double dy = y + 0.5 - r;
      const double d = std::sqrt(dx * dx + dy * dy) / r;
      if (d > 1.0) continue;
      const double outer = 1.0 - smoothstep(0.94, 1.0, d);
      if (d < rim) {
        const double hl = std::hypot(x + 0.5 - hx, y + 0.5 - hy) / r;
        const double alpha = 0.45 + 0.4 * (1.0 - smoothstep(0.0, 0.25, hl));
        put(a, x, y, interior, alpha);
      } else {
        put(a, x, y, edge, 0.9 * outer);
      }
    }
  }
  return a;
}

RasterImage corrupt_overlay(const RasterImage& image, const OverlayAsset& asset, double coverage,
                            double opacity, std::uint64_t seed) {
  validate_image(image);
  validate_asset(asset);
  if (!(coverage > 0.0 && coverage <= 1.0)) {
    throw ValidationError("overlay coverage must be in (0, 1], got " + std::to_string(coverage));
  }
  if (!(opacity > 0.0 && opacity <= 1.0)) {
    throw ValidationError("overlay opacity must be in (0, 1], got " + std::to_string(opacity));
  }
  if (asset.width > image.width() || asset.height > image.height()) {
    throw ValidationError("overlay asset (" + std::to_string(asset.width) + "x" +
                          std::to_string(asset.height) + ") larger than image (" +
                          std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                          ")");
  }

  RasterImage out = image;
  const int w = image.width();
  const int h = image.height();
  std::vector<std::uint8_t> touched(static_cast<std::size_t>(w) * h, 0);
  const auto target = static_cast<std::size_t>(std::ceil(coverage * static_cast<double>(touched.size())));
  std::size_t touched_count = 0;

  Rng rng(seed);
  for (int stamp = 0; stamp < kMaxStamps && touched_count < target; ++stamp) {
    const int ox = rng.uniform_int(0, w - asset.width);
    const int oy = rng.uniform_int(0, h - asset.height);
    for (int ay = 0; ay < asset.height; ++ay) {
      for (int ax = 0; ax < asset.width; ++ax) {
        const std::size_t ai = (static_cast<std::size_t>(ay) * asset.width + ax) * 4;
        const std::uint8_t alpha8 = asset.rgba[ai + 3];
        if (alpha8 == 0) continue;
        const int x = ox + ax;
        const int y = oy + ay;
        const double a = alpha8 / 255.0 * opacity;
        for (int c = 0; c < 3; ++c) {
          out.at(x, y, c) = to_u8((1.0 - a) * out.at(x, y, c) + a * asset.rgba[ai + c]);
        }
        std::uint8_t& t = touched[static_cast<std::size_t>(y) * w + x];
        if (!t) {
          t = 1;
          ++touched_count;
        }
      }
    }
  }
  return out;
}

}  // namespace pathrobust
