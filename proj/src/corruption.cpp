#include "pathrobust/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathrobust/codec.hpp"
#include "pathrobust/color.hpp"
#include "pathrobust/error.hpp"
#include "pathrobust/kernel.hpp"
#include "pathrobust/rng.hpp"

namespace pathrobust {

namespace {

template <typename Fn>
RasterImage map_hsv(const RasterImage& image, Fn&& fn) {
  validate_image(image);
  RasterImage out(image.width(), image.height());
  const auto src = image.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    Hsv hsv = rgb_to_hsv({src[i], src[i + 1], src[i + 2]});
    fn(hsv);
    const Rgb8 rgb = hsv_to_rgb(hsv);
    dst[i] = rgb.r;
    dst[i + 1] = rgb.g;
    dst[i + 2] = rgb.b;
  }
  return out;
}

void check_delta(double delta, const char* what) {
  if (!(delta >= -1.0 && delta <= 1.0)) {
    throw ValidationError(std::string(what) + " delta must be in [-1, 1], got " +
                          std::to_string(delta));
  }
}

double signed_by(Rng& rng, double magnitude) { return rng.coin() ? -magnitude : magnitude; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view sample_id, CorruptionKind kind,
                          Severity severity) {
  std::uint64_t h = mix64(run_seed);
  h = stable_hash(sample_id, h);
  h = stable_hash(kind_name(kind), h);
  return mix64(h ^ static_cast<std::uint64_t>(severity.level()));
}

RasterImage corrupt_jpeg(const RasterImage& image, int quality) {
  return decode_jpeg(encode_jpeg(image, quality));
}

RasterImage corrupt_pixelate(const RasterImage& image, double factor) {
  validate_image(image);
  if (!(factor > 1.0)) {
    throw ValidationError("pixelate factor must be > 1, got " + std::to_string(factor));
  }
  const int w = image.width();
  const int h = image.height();
  const int sw = static_cast<int>(std::floor(w / factor));
  const int sh = static_cast<int>(std::floor(h / factor));
  if (sw < 1 || sh < 1) {
    throw ValidationError("pixelate factor " + std::to_string(factor) + " collapses a " +
                          std::to_string(w) + "x" + std::to_string(h) + " image below one pixel");
  }
  // Pixel-centre sampling both ways: (i + 0.5) * from / to, floored.
  auto centre = [](int i, int from, int to) {
    return static_cast<int>((2LL * i + 1) * from / (2LL * to));
  };
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int src_y = centre(centre(y, sh, h), h, sh);
    for (int x = 0; x < w; ++x) {
      const int src_x = centre(centre(x, sw, w), w, sw);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = image.at(src_x, src_y, c);
    }
  }
  return out;
}

RasterImage corrupt_brightness(const RasterImage& image, double delta) {
  check_delta(delta, "brightness");
  return map_hsv(image, [delta](Hsv& p) { p.v = std::clamp(p.v + delta, 0.0, 1.0); });
}

RasterImage corrupt_saturation(const RasterImage& image, double delta) {
  check_delta(delta, "saturation");
  return map_hsv(image, [delta](Hsv& p) { p.s = std::clamp(p.s + delta, 0.0, 1.0); });
}

RasterImage corrupt_hue(const RasterImage& image, double shift_deg) {
  if (!(shift_deg > -180.0 && shift_deg <= 180.0)) {
    throw ValidationError("hue shift must be in (-180, 180], got " + std::to_string(shift_deg));
  }
  return map_hsv(image, [shift_deg](Hsv& p) {
    double h = std::fmod(p.h + shift_deg, 360.0);
    if (h < 0.0) h += 360.0;
    p.h = h;
  });
}

ResolvedParameters resolve_parameters(const CorruptionSpec& spec, const SeverityTable& table) {
  if (spec.severity.clean()) return params::Identity{};
  const int i = spec.severity.level() - 1;
  Rng rng(spec.seed);
  switch (spec.kind) {
    case CorruptionKind::Jpeg:
      return params::Jpeg{table.jpeg_quality[i]};
    case CorruptionKind::Pixelate:
      return params::Pixelate{table.pixelate_factor[i]};
    case CorruptionKind::DefocusBlur:
      return params::Defocus{table.defocus_radius[i]};
    case CorruptionKind::MotionBlur:
      return params::Motion{table.motion_length[i], rng.uniform(0.0, 180.0)};
    case CorruptionKind::Brightness:
      return params::Brightness{signed_by(rng, table.brightness_delta[i])};
    case CorruptionKind::Saturation:
      return params::Saturation{signed_by(rng, table.saturation_delta[i])};
    case CorruptionKind::Hue: {
      const double shift = signed_by(rng, table.hue_shift[i]);
      return params::Hue{shift <= -180.0 ? shift + 360.0 : shift};
    }
    case CorruptionKind::Mark:
    case CorruptionKind::Bubble: {
      const OverlayLevels& levels =
          spec.kind == CorruptionKind::Mark ? table.mark : table.bubble;
      const std::uint64_t asset_seed = rng.next_u64();
      const std::uint64_t placement_seed = rng.next_u64();
      return params::Overlay{levels.coverage[i], levels.opacity[i], asset_seed, placement_seed};
    }
  }
  throw ValidationError("unknown corruption kind");
}

OverlayAsset builtin_asset(CorruptionKind kind, int image_width, int image_height,
                           std::uint64_t asset_seed) {
  const int shorter = std::min(image_width, image_height);
  if (kind == CorruptionKind::Bubble) {
    return make_bubble_asset(std::max(1, (shorter * 3) / 10), asset_seed);
  }
  if (kind != CorruptionKind::Mark) {
    throw ValidationError("builtin_asset: kind has no overlay asset");
  }
  // Orientation comes from the low bit so the stroke direction varies per seed.
  const bool vertical = (mix64(asset_seed) & 1u) != 0;
  const int length = std::max(1, (shorter * 7) / 10);
  const int thickness = std::max(1, shorter / 4);
  return vertical ? make_mark_asset(thickness, length, asset_seed)
                  : make_mark_asset(length, thickness, asset_seed);
}

RasterImage apply_corruption(const RasterImage& image, const CorruptionSpec& spec,
                             const SeverityTable& table) {
  validate_image(image);
  const ResolvedParameters resolved = resolve_parameters(spec, table);
  return std::visit(
      [&](const auto& p) -> RasterImage {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, params::Identity>) {
          return image;
        } else if constexpr (std::is_same_v<P, params::Jpeg>) {
          return corrupt_jpeg(image, p.quality);
        } else if constexpr (std::is_same_v<P, params::Pixelate>) {
          return corrupt_pixelate(image, p.factor);
        } else if constexpr (std::is_same_v<P, params::Defocus>) {
          return convolve(image, build_defocus_kernel(p.radius));
        } else if constexpr (std::is_same_v<P, params::Motion>) {
          return convolve(image, build_motion_kernel(p.length, p.angle_deg));
        } else if constexpr (std::is_same_v<P, params::Brightness>) {
          return corrupt_brightness(image, p.delta);
        } else if constexpr (std::is_same_v<P, params::Saturation>) {
          return corrupt_saturation(image, p.delta);
        } else if constexpr (std::is_same_v<P, params::Hue>) {
          return corrupt_hue(image, p.shift_deg);
        } else {
          const OverlayAsset asset =
              builtin_asset(spec.kind, image.width(), image.height(), p.asset_seed);
          return corrupt_overlay(image, asset, p.coverage, p.opacity, p.placement_seed);
        }
      },
      resolved);
}

}  // namespace pathrobust
