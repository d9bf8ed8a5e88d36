#include "pathrobust/kernel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pathrobust/error.hpp"

namespace pathrobust {

namespace {

constexpr int kDiskSubsamples = 16;

std::vector<double> normalized(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return weights;
}

int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

}  // namespace

ConvolutionKernel::ConvolutionKernel(int size, std::vector<double> weights)
    : size_(size), weights_(std::move(weights)) {
  if (size < 1 || size % 2 == 0) {
    throw ValidationError("kernel size must be odd and >= 1, got " + std::to_string(size));
  }
  if (weights_.size() != static_cast<std::size_t>(size) * size) {
    throw ValidationError("kernel weight count does not match size");
  }
  double total = 0.0;
  for (const double w : weights_) {
    if (!(w >= 0.0)) throw ValidationError("kernel weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw ValidationError("kernel weights must sum to 1, got " + std::to_string(total));
  }
}

ConvolutionKernel ConvolutionKernel::identity() { return ConvolutionKernel(1, {1.0}); }

ConvolutionKernel ConvolutionKernel::transposed() const {
  std::vector<double> t(weights_.size());
  for (int r = 0; r < size_; ++r) {
    for (int c = 0; c < size_; ++c) t[static_cast<std::size_t>(c) * size_ + r] = at(r, c);
  }
  return ConvolutionKernel(size_, std::move(t));
}

ConvolutionKernel build_defocus_kernel(int radius) {
  if (radius < 1) throw ValidationError("defocus radius must be >= 1");
  const int size = 2 * radius + 1;
  const double r2 = static_cast<double>(radius) * radius;
  // Sub-sample offsets are symmetric about the cell centre, so the integer
  // hit counts are exactly symmetric under transposition and point reflection.
  std::vector<double> weights(static_cast<std::size_t>(size) * size, 0.0);
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) {
      int hits = 0;
      for (int a = 0; a < kDiskSubsamples; ++a) {
        const double dy = (row - radius) + (a + 0.5) / kDiskSubsamples - 0.5;
        for (int b = 0; b < kDiskSubsamples; ++b) {
          const double dx = (col - radius) + (b + 0.5) / kDiskSubsamples - 0.5;
          if (dx * dx + dy * dy <= r2) ++hits;
        }
      }
      weights[static_cast<std::size_t>(row) * size + col] = hits;
    }
  }
  return ConvolutionKernel(size, normalized(std::move(weights)));
}

ConvolutionKernel build_motion_kernel(int length, double angle_deg) {
  if (length < 1) throw ValidationError("motion length must be >= 1");
  const int size = length | 1;
  const int centre = size / 2;
  const double theta = angle_deg * std::numbers::pi / 180.0;
  // Snap tiny components so axis-aligned angles rasterise exactly.
  double cx = std::cos(theta);
  double sy = std::sin(theta);
  if (std::abs(cx) < 1e-12) cx = 0.0;
  if (std::abs(sy) < 1e-12) sy = 0.0;

  std::vector<double> weights(static_cast<std::size_t>(size) * size, 0.0);
  for (int k = 0; k < length; ++k) {
    const double t = k - (length - 1) / 2.0;
    const int col = clamp_index(centre + static_cast<int>(std::lround(t * cx)), size);
    const int row = clamp_index(centre - static_cast<int>(std::lround(t * sy)), size);
    weights[static_cast<std::size_t>(row) * size + col] += 1.0;
  }
  return ConvolutionKernel(size, normalized(std::move(weights)));
}

RasterImage convolve(const RasterImage& image, const ConvolutionKernel& kernel) {
  validate_image(image);
  const int w = image.width();
  const int h = image.height();
  const int size = kernel.size();
  const int rad = kernel.radius();
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int ky = 0; ky < size; ++ky) {
        const int sy = clamp_index(y - (ky - rad), h);
        for (int kx = 0; kx < size; ++kx) {
          const double wgt = kernel.at(ky, kx);
          if (wgt == 0.0) continue;
          const int sx = clamp_index(x - (kx - rad), w);
          for (int c = 0; c < 3; ++c) acc[c] += wgt * image.at(sx, sy, c);
        }
      }
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = to_u8(acc[c]);
    }
  }
  return out;
}

}  // namespace pathrobust
