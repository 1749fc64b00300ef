#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace agrihub {

/// An absolute IRI with scheme `https` or `urn`. Construction validates;
/// an Iri value is always well-formed.
class Iri {
 public:
  explicit Iri(std::string value);

  static bool is_valid(std::string_view text) noexcept;
  static std::optional<Iri> try_parse(std::string_view text);

  const std::string& str() const noexcept { return value_; }
  bool starts_with(std::string_view prefix) const noexcept {
    return std::string_view(value_).starts_with(prefix);
  }

  friend bool operator==(const Iri&, const Iri&) = default;
  friend std::strong_ordering operator<=>(const Iri& a, const Iri& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  struct Unchecked {};
  Iri(std::string value, Unchecked) : value_(std::move(value)) {}
  friend Iri mint_iri(const Iri& ns, std::string_view local_name);

  std::string value_;
};

/// RFC 3986 percent-encoding of everything outside the unreserved set,
/// upper-case hex, byte-wise over UTF-8.
std::string percent_encode(std::string_view text);

/// Inverse of percent_encode; malformed escapes are kept literally.
std::string percent_decode(std::string_view text);

/// namespace + percent_encode(local_name). Throws validation for an empty
/// local name.
Iri mint_iri(const Iri& ns, std::string_view local_name);
Iri mint_iri(std::string_view ns, std::string_view local_name);

}  // namespace agrihub

template <>
struct std::hash<agrihub::Iri> {
  std::size_t operator()(const agrihub::Iri& iri) const noexcept {
    return std::hash<std::string>{}(iri.str());
  }
};
