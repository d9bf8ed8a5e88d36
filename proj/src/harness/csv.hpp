#pragma once

// Minimal delimited-text helpers shared by the prediction and correlation readers.

#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathrobust/error.hpp"

namespace pathrobust::harness::csv {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline void strip_bom(std::string& line) {
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
}

class Header {
 public:
  Header(std::string_view line, const std::string& source) : source_(source) {
    const auto fields = split(line);
    for (std::size_t i = 0; i < fields.size(); ++i) index_[std::string(fields[i])] = i;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(const std::string& name) const {
    const auto i = find(name);
    if (!i) throw ParseError(source_, 1, "header lacks required column '" + name + "'");
    return *i;
  }

  std::size_t columns() const { return index_.size(); }

 private:
  std::string source_;
  std::map<std::string, std::size_t> index_;
};

template <typename T>
T parse_number(std::string_view field, const std::string& source, std::size_t line,
               const char* column) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(source, line,
                     std::string("column '") + column + "': cannot parse '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace pathrobust::harness::csv
