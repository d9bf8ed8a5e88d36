#include "pathrobust/harness/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pathrobust/error.hpp"
#include "pathrobust/harness/config.hpp"

namespace pathrobust::harness {

using nlohmann::json;

namespace {

template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string(), number, e.what());
    }
    if (!obj.is_object()) throw ParseError(path.string(), number, "expected a JSON object");
    try {
      fn(obj, number);
    } catch (const json::exception& e) {
      throw ParseError(path.string(), number, e.what());
    }
  }
}

std::string type_of(const json& obj) { return obj.value("type", std::string()); }

}  // namespace

void validate_sample_id(const std::string& id) {
  if (id.empty()) throw ValidationError("sample_id must not be empty");
  if (id == "." || id == ".." || id.find("..") != std::string::npos) {
    throw ValidationError("sample_id must not contain '..': " + id);
  }
  for (const unsigned char ch : id) {
    if (ch == '/' || ch == '\\' || ch == ',' || ch == '"' || ch < 0x20 || ch == 0x7f) {
      throw ValidationError("sample_id contains a forbidden character: " + id);
    }
  }
}

DatasetManifest load_dataset_manifest(const std::filesystem::path& path) {
  DatasetManifest m;
  m.base_dir = path.parent_path();
  bool have_header = false;
  std::set<std::string> seen;
  for_each_json_line(path, [&](const json& obj, std::size_t line) {
    const std::string type = type_of(obj);
    if (type == "dataset") {
      if (have_header) throw ParseError(path.string(), line, "duplicate dataset header");
      have_header = true;
      m.name = obj.value("name", std::string());
      m.class_names = obj.value("classes", std::vector<std::string>{});
    } else if (type == "sample") {
      DatasetEntry e{obj.at("sample_id").get<std::string>(), obj.at("image_path").get<std::string>(),
                     obj.at("label").get<int>()};
      try {
        validate_sample_id(e.sample_id);
      } catch (const ValidationError& err) {
        throw ParseError(path.string(), line, err.what());
      }
      if (!seen.insert(e.sample_id).second) {
        throw ParseError(path.string(), line, "duplicate sample_id " + e.sample_id);
      }
      m.entries.push_back(std::move(e));
    } else {
      throw ParseError(path.string(), line, "unknown record type '" + type + "'");
    }
  });
  if (!have_header) throw ParseError(path.string(), 1, "missing dataset header line");
  return m;
}

void write_dataset_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << json{{"type", "dataset"}, {"name", manifest.name}, {"classes", manifest.class_names}}.dump()
      << "\n";
  for (const auto& e : manifest.entries) {
    out << json{{"type", "sample"},
                {"sample_id", e.sample_id},
                {"image_path", e.image_path},
                {"label", e.label}}
               .dump()
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::string corrupted_relative_path(const std::string& sample_id, CorruptionKind kind,
                                    Severity severity) {
  return std::string(kind_name(kind)) + "/" + std::to_string(severity.level()) + "/" + sample_id +
         ".png";
}

std::string serialize_corrupted_manifest(const CorruptedManifest& m) {
  std::ostringstream out;
  out << json{{"type", "header"},
              {"format", kCorruptedManifestFormat},
              {"source_manifest", m.source_manifest},
              {"run_seed", m.run_seed},
              {"mode", m.streamed ? "stream" : "materialize"},
              {"source_samples", m.source_samples},
              {"severity_table", severity_table_to_json(m.table)}}
             .dump()
      << "\n";
  for (const auto& e : m.entries) {
    json obj{{"type", "entry"},
             {"sample_id", e.sample_id},
             {"kind", kind_name(e.kind)},
             {"severity", e.severity.level()},
             {"seed", e.seed},
             {"label", e.label}};
    obj["output_path"] = e.output_path ? json(*e.output_path) : json(nullptr);
    out << obj.dump() << "\n";
  }
  for (const auto& f : m.failures) {
    out << json{{"type", "failure"},
                {"sample_id", f.sample_id},
                {"image_path", f.image_path},
                {"error", f.error}}
               .dump()
        << "\n";
  }
  return out.str();
}

void write_corrupted_manifest(const std::filesystem::path& path, const CorruptedManifest& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize_corrupted_manifest(m);
  if (!out) throw IoError("write failed: " + path.string());
}

CorruptedManifest load_corrupted_manifest(const std::filesystem::path& path) {
  CorruptedManifest m;
  m.base_dir = path.parent_path();
  bool have_header = false;
  for_each_json_line(path, [&](const json& obj, std::size_t line) {
    const std::string type = type_of(obj);
    if (type == "header") {
      if (obj.value("format", std::string()) != kCorruptedManifestFormat) {
        throw ParseError(path.string(), line, "unsupported manifest format");
      }
      have_header = true;
      m.source_manifest = obj.at("source_manifest").get<std::string>();
      m.run_seed = obj.at("run_seed").get<std::uint64_t>();
      m.streamed = obj.at("mode").get<std::string>() == "stream";
      m.source_samples = obj.value("source_samples", std::size_t{0});
      try {
        m.table = severity_table_from_json(obj.at("severity_table"));
      } catch (const ValidationError& err) {
        throw ParseError(path.string(), line, err.what());
      }
    } else if (type == "entry") {
      CorruptedEntry e;
      e.sample_id = obj.at("sample_id").get<std::string>();
      const auto kind = parse_kind(obj.at("kind").get<std::string>());
      if (!kind) throw ParseError(path.string(), line, "unknown corruption kind");
      e.kind = *kind;
      const int level = obj.at("severity").get<int>();
      if (level < 1 || level > kNumSeverities) {
        throw ParseError(path.string(), line, "entry severity must be in 1..5");
      }
      e.severity = Severity(level);
      e.seed = obj.at("seed").get<std::uint64_t>();
      e.label = obj.value("label", 0);
      if (const auto it = obj.find("output_path"); it != obj.end() && !it->is_null()) {
        e.output_path = it->get<std::string>();
      }
      m.entries.push_back(std::move(e));
    } else if (type == "failure") {
      m.failures.push_back({obj.at("sample_id").get<std::string>(),
                            obj.value("image_path", std::string()),
                            obj.value("error", std::string())});
    } else {
      throw ParseError(path.string(), line, "unknown record type '" + type + "'");
    }
  });
  if (!have_header) throw ParseError(path.string(), 1, "missing manifest header line");
  return m;
}

}  // namespace pathrobust::harness
