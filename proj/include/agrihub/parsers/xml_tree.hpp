#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agrihub::parsers {

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;
  std::size_t byte_offset = 0;

  const std::string* attr(std::string_view key) const noexcept;
};

inline constexpr std::size_t kMaxXmlDepth = 64;

/// Parses a whole document into an element tree (text content dropped).
/// Malformed input throws parse-error carrying the byte offset.
XmlElement parse_xml(std::string_view bytes);

}  // namespace agrihub::parsers
