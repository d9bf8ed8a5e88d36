#pragma once

#include <cstdint>
#include <variant>

#include "pathrobust/image.hpp"
#include "pathrobust/overlay.hpp"
#include "pathrobust/severity.hpp"

namespace pathrobust {

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::Jpeg;
  Severity severity;
  std::uint64_t seed = 0;
};

// Per-sample seed for batch runs: a hash of (run seed, sample id, kind,
// severity), independent of iteration order.
std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view sample_id, CorruptionKind kind,
                          Severity severity);

RasterImage corrupt_jpeg(const RasterImage& image, int quality);
// Nearest-neighbour down to floor(dim / factor), then back up.
RasterImage corrupt_pixelate(const RasterImage& image, double factor);
// delta is a fraction of the [0, 1] V / S range; shift is in degrees.
RasterImage corrupt_brightness(const RasterImage& image, double delta);
RasterImage corrupt_saturation(const RasterImage& image, double delta);
RasterImage corrupt_hue(const RasterImage& image, double shift_deg);

namespace params {
struct Identity {};
struct Jpeg { int quality; };
struct Pixelate { double factor; };
struct Defocus { int radius; };
struct Motion { int length; double angle_deg; };
struct Brightness { double delta; };
struct Saturation { double delta; };
struct Hue { double shift_deg; };
struct Overlay {
  double coverage;
  double opacity;
  std::uint64_t asset_seed;
  std::uint64_t placement_seed;
};
}  // namespace params

using ResolvedParameters =
    std::variant<params::Identity, params::Jpeg, params::Pixelate, params::Defocus, params::Motion,
                 params::Brightness, params::Saturation, params::Hue, params::Overlay>;

// Concrete parameters a spec resolves to, with every seed-drawn choice
// (signs, motion angle, overlay seeds) made.
ResolvedParameters resolve_parameters(const CorruptionSpec& spec,
                                      const SeverityTable& table = SeverityTable::defaults());

// Built-in overlay asset for a kind and image size.
OverlayAsset builtin_asset(CorruptionKind kind, int image_width, int image_height,
                           std::uint64_t asset_seed);

// c(x, s). Severity 0 returns an exact copy. Pure function of its arguments.
RasterImage apply_corruption(const RasterImage& image, const CorruptionSpec& spec,
                             const SeverityTable& table = SeverityTable::defaults());

}  // namespace pathrobust
