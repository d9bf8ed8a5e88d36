#pragma once

#include <cstdint>
#include <vector>

#include "pathrobust/image.hpp"

namespace pathrobust {

// RGBA stamp. Alpha is the per-pixel mixing weight.
struct OverlayAsset {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;  // width * height * 4

  std::uint8_t alpha(int x, int y) const {
    return rgba[(static_cast<std::size_t>(y) * width + x) * 4 + 3];
  }
};

void validate_asset(const OverlayAsset& asset);

// Marker-pen stroke: a thick, slightly wavy band of ink with soft edges,
// running along the longer side of the asset.
OverlayAsset make_mark_asset(int width, int height, std::uint64_t seed);

// Air bubble: disc with a brightened interior and a dark refractive rim.
OverlayAsset make_bubble_asset(int diameter, std::uint64_t seed);

// Stamps `asset` at seed-chosen positions until at least `coverage` of the
// image pixels lie under non-zero alpha (or the placement budget runs out).
// Each stamp blends out = (1 - a*opacity) * in + a*opacity * asset.
RasterImage corrupt_overlay(const RasterImage& image, const OverlayAsset& asset,
                            double coverage, double opacity, std::uint64_t seed);

}  // namespace pathrobust
