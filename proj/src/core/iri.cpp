#include "agrihub/core/iri.hpp"

#include "agrihub/core/error.hpp"

namespace agrihub {

namespace {

bool is_unreserved(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '.' || c == '_' || c == '~';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

bool Iri::is_valid(std::string_view text) noexcept {
  if (text.empty()) return false;
  for (unsigned char c : text) {
    if (c <= 0x20 || c == 0x7F || c == '<' || c == '>' || c == '"') return false;
  }
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) return false;
  auto scheme = text.substr(0, colon);
  return scheme == "https" || scheme == "urn";
}

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) throw Error(Errc::malformed_iri, "not an https/urn IRI: '" + value_ + "'");
}

std::optional<Iri> Iri::try_parse(std::string_view text) {
  if (!is_valid(text)) return std::nullopt;
  return Iri(std::string(text));
}

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (is_unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      int hi = hex_value(text[i + 1]);
      int lo = hex_value(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

Iri mint_iri(const Iri& ns, std::string_view local_name) {
  if (local_name.empty()) throw Error(Errc::validation, "empty local name for namespace " + ns.str());
  return Iri(ns.str() + percent_encode(local_name), Iri::Unchecked{});
}

Iri mint_iri(std::string_view ns, std::string_view local_name) {
  return mint_iri(Iri(std::string(ns)), local_name);
}

}  // namespace agrihub
