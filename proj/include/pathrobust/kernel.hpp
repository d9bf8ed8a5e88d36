#pragma once

#include <vector>

#include "pathrobust/image.hpp"

namespace pathrobust {

// Square, odd-sized, non-negative kernel whose weights sum to 1.
class ConvolutionKernel {
 public:
  ConvolutionKernel(int size, std::vector<double> weights);

  static ConvolutionKernel identity();

  int size() const { return size_; }
  int radius() const { return size_ / 2; }
  // Row-major; (row, col) with (radius, radius) at the centre.
  double at(int row, int col) const { return weights_[static_cast<std::size_t>(row) * size_ + col]; }
  const std::vector<double>& weights() const { return weights_; }

  ConvolutionKernel transposed() const;

 private:
  int size_;
  std::vector<double> weights_;
};

// Anti-aliased disk of the given radius, size 2*radius+1. Each cell weight is
// its area fraction inside the disk, estimated on a fixed 16x16 sub-grid.
ConvolutionKernel build_defocus_kernel(int radius);

// Line segment through the centre: `length` unit-spaced samples along the
// direction `angle_deg` (counter-clockwise from +x), each rounded to the nearest cell.
ConvolutionKernel build_motion_kernel(int length, double angle_deg);

// out(x, y) = sum_ij k(i, j) * in(x - dx, y - dy) with replicate edges.
RasterImage convolve(const RasterImage& image, const ConvolutionKernel& kernel);

}  // namespace pathrobust
