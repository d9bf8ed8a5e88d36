#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pathrobust {

// 8-bit interleaved RGB buffer, row-major.
class RasterImage {
 public:
  static constexpr int kChannels = 3;

  RasterImage() = default;
  // Zero-filled image. Throws ValidationError unless width, height > 0.
  RasterImage(int width, int height);
  // Takes ownership of `pixels`; its length must be width * height * 3.
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::uint8_t at(int x, int y, int c) const { return pixels_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return pixels_[index(x, y, c)]; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Throws ValidationError if the image is empty or its buffer length is wrong.
void validate_image(const RasterImage& image);

// Peak signal-to-noise ratio in dB over all channels, peak 255.
// Identical images give +infinity. Dimensions must match.
double psnr(const RasterImage& a, const RasterImage& b);

// Round half to even and clamp to [0, 255].
std::uint8_t to_u8(double value);

}  // namespace pathrobust
