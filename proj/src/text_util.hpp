// Internal line/field parsing helpers for the text file formats.

#ifndef PROTINFER_SRC_TEXT_UTIL_HPP_
#define PROTINFER_SRC_TEXT_UTIL_HPP_

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "protinfer/errors.hpp"

namespace protinfer::detail {

inline void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::uint64_t parse_uint(std::string_view field, const char* what, int base = 10) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.begin(), field.end(), value, base);
  if (ec != std::errc{} || ptr != field.end())
    throw Error(Errc::bad_format, std::string("cannot parse ") + what + " from '" +
                                      std::string(field) + "'");
  return value;
}

}  // namespace protinfer::detail

#endif  // PROTINFER_SRC_TEXT_UTIL_HPP_
