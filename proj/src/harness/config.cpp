#include "pathrobust/harness/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "pathrobust/error.hpp"

namespace pathrobust::harness {

using nlohmann::json;

namespace {

template <typename T>
void read_levels(const json& obj, const char* kind, const char* field, PerLevel<T>& target) {
  const auto it = obj.find(field);
  if (it == obj.end()) return;
  if (!it->is_array() || it->size() != kNumSeverities) {
    throw ValidationError(std::string("config: ") + kind + "." + field +
                          " must be an array of 5 numbers");
  }
  for (int i = 0; i < kNumSeverities; ++i) {
    const json& v = (*it)[i];
    if (!v.is_number()) {
      throw ValidationError(std::string("config: ") + kind + "." + field + " must hold numbers");
    }
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        throw ValidationError(std::string("config: ") + kind + "." + field + " must hold integers");
      }
    }
    target[i] = v.get<T>();
  }
}

void check_fields(const json& obj, const char* kind, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ValidationError(std::string("config: ") + kind + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ValidationError(std::string("config: unknown field ") + kind + "." + key);
    }
  }
}

}  // namespace

json severity_table_to_json(const SeverityTable& t) {
  return json{
      {"jpeg", {{"quality", t.jpeg_quality}}},
      {"pixelate", {{"factor", t.pixelate_factor}}},
      {"defocus_blur", {{"radius", t.defocus_radius}}},
      {"motion_blur", {{"length", t.motion_length}}},
      {"brightness", {{"delta", t.brightness_delta}}},
      {"saturation", {{"delta", t.saturation_delta}}},
      {"hue", {{"shift", t.hue_shift}}},
      {"mark", {{"coverage", t.mark.coverage}, {"opacity", t.mark.opacity}}},
      {"bubble", {{"coverage", t.bubble.coverage}, {"opacity", t.bubble.opacity}}},
  };
}

SeverityTable severity_table_from_json(const json& config, const SeverityTable& base) {
  if (!config.is_object()) throw ValidationError("config: top level must be an object");
  SeverityTable t = base;
  for (const auto& [key, obj] : config.items()) {
    const auto kind = parse_kind(key);
    if (!kind) throw ValidationError("config: unknown corruption kind " + key);
    switch (*kind) {
      case CorruptionKind::Jpeg:
        check_fields(obj, "jpeg", {"quality"});
        read_levels(obj, "jpeg", "quality", t.jpeg_quality);
        break;
      case CorruptionKind::Pixelate:
        check_fields(obj, "pixelate", {"factor"});
        read_levels(obj, "pixelate", "factor", t.pixelate_factor);
        break;
      case CorruptionKind::DefocusBlur:
        check_fields(obj, "defocus_blur", {"radius"});
        read_levels(obj, "defocus_blur", "radius", t.defocus_radius);
        break;
      case CorruptionKind::MotionBlur:
        check_fields(obj, "motion_blur", {"length"});
        read_levels(obj, "motion_blur", "length", t.motion_length);
        break;
      case CorruptionKind::Brightness:
        check_fields(obj, "brightness", {"delta"});
        read_levels(obj, "brightness", "delta", t.brightness_delta);
        break;
      case CorruptionKind::Saturation:
        check_fields(obj, "saturation", {"delta"});
        read_levels(obj, "saturation", "delta", t.saturation_delta);
        break;
      case CorruptionKind::Hue:
        check_fields(obj, "hue", {"shift"});
        read_levels(obj, "hue", "shift", t.hue_shift);
        break;
      case CorruptionKind::Mark:
        check_fields(obj, "mark", {"coverage", "opacity"});
        read_levels(obj, "mark", "coverage", t.mark.coverage);
        read_levels(obj, "mark", "opacity", t.mark.opacity);
        break;
      case CorruptionKind::Bubble:
        check_fields(obj, "bubble", {"coverage", "opacity"});
        read_levels(obj, "bubble", "coverage", t.bubble.coverage);
        read_levels(obj, "bubble", "opacity", t.bubble.opacity);
        break;
    }
  }
  t.validate();
  return t;
}

SeverityTable load_severity_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return severity_table_from_json(config);
}

}  // namespace pathrobust::harness
