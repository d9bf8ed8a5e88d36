#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pathrobust/image.hpp"
#include "pathrobust/overlay.hpp"

namespace pathrobust {

// Baseline JPEG with fixed encoder settings (4:2:0, islow DCT, no
// optimisation), so equal inputs always give equal bytes.
std::vector<std::uint8_t> encode_jpeg(const RasterImage& image, int quality);
RasterImage decode_jpeg(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const RasterImage& image);
// Any PNG colour type is converted to 8-bit RGB (alpha is dropped).
RasterImage decode_png(std::span<const std::uint8_t> bytes);
// Any PNG colour type is converted to 8-bit RGBA.
OverlayAsset decode_png_rgba(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

RasterImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& image);

}  // namespace pathrobust
