#include "pathrobust/image.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pathrobust/error.hpp"

namespace pathrobust {

RasterImage::RasterImage(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  pixels_.assign(pixel_count() * kChannels, 0);
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  validate_image(*this);
}

void validate_image(const RasterImage& image) {
  if (image.width() <= 0 || image.height() <= 0) {
    throw ValidationError("image dimensions must be positive, got " +
                          std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  const std::size_t expected = image.pixel_count() * RasterImage::kChannels;
  if (image.pixels().size() != expected) {
    throw ValidationError("pixel buffer holds " + std::to_string(image.pixels().size()) +
                          " bytes, expected " + std::to_string(expected));
  }
}

double psnr(const RasterImage& a, const RasterImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ValidationError("psnr: image dimensions differ");
  }
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double sse = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(pa.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::uint8_t to_u8(double value) {
  // nearbyint honours the default round-half-to-even mode.
  const double r = std::nearbyint(value);
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

}  // namespace pathrobust
