#include "agrihub/core/literal.hpp"

#include <charconv>
#include <cmath>

#include "agrihub/core/error.hpp"

namespace agrihub {

namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
constexpr std::string_view kWktIri = "http://www.opengis.net/ont/geosparql#wktLiteral";

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

bool valid_integer(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  return all_digits(s);
}

bool valid_decimal(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return all_digits(s);
  auto whole = s.substr(0, dot);
  auto frac = s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return false;
  return (whole.empty() || all_digits(whole)) && (frac.empty() || all_digits(frac));
}

}  // namespace

std::string_view datatype_name(Datatype dt) noexcept {
  switch (dt) {
    case Datatype::string: return "string";
    case Datatype::integer: return "integer";
    case Datatype::decimal: return "decimal";
    case Datatype::boolean: return "boolean";
    case Datatype::date_time: return "datetime";
    case Datatype::wkt_geometry: return "wkt-geometry";
  }
  return "string";
}

std::optional<Datatype> datatype_from_name(std::string_view name) noexcept {
  for (auto dt : kAllDatatypes)
    if (datatype_name(dt) == name) return dt;
  if (name == "dateTime") return Datatype::date_time;
  return std::nullopt;
}

std::string_view datatype_iri(Datatype dt) noexcept {
  switch (dt) {
    case Datatype::string: return "http://www.w3.org/2001/XMLSchema#string";
    case Datatype::integer: return "http://www.w3.org/2001/XMLSchema#integer";
    case Datatype::decimal: return "http://www.w3.org/2001/XMLSchema#decimal";
    case Datatype::boolean: return "http://www.w3.org/2001/XMLSchema#boolean";
    case Datatype::date_time: return "http://www.w3.org/2001/XMLSchema#dateTime";
    case Datatype::wkt_geometry: return kWktIri;
  }
  return kXsd;
}

std::optional<Datatype> datatype_from_iri(std::string_view iri) noexcept {
  for (auto dt : kAllDatatypes)
    if (datatype_iri(dt) == iri) return dt;
  return std::nullopt;
}

bool lexical_is_valid(Datatype dt, std::string_view lexical) noexcept {
  switch (dt) {
    case Datatype::string: return true;
    case Datatype::integer: return valid_integer(lexical);
    case Datatype::decimal: return valid_decimal(lexical);
    case Datatype::boolean: return lexical == "true" || lexical == "false";
    case Datatype::date_time: return parse_datetime(lexical).has_value();
    case Datatype::wkt_geometry: return Iri::is_valid(lexical);
  }
  return false;
}

Literal::Literal(std::string lexical, Datatype datatype) : lexical_(std::move(lexical)), datatype_(datatype) {
  if (!lexical_is_valid(datatype_, lexical_))
    throw Error(Errc::invalid_literal,
                "'" + lexical_ + "' is not a valid " + std::string(datatype_name(datatype_)) + " literal");
}

Literal Literal::integer(std::int64_t value) { return {std::to_string(value), Datatype::integer}; }

Literal Literal::decimal(double value) {
  if (!std::isfinite(value)) throw Error(Errc::invalid_literal, "non-finite decimal");
  return {format_decimal(value), Datatype::decimal};
}

Literal Literal::boolean(bool value) { return {value ? "true" : "false", Datatype::boolean}; }

Literal Literal::date_time(EpochMs ms) { return {format_datetime(ms), Datatype::date_time}; }

Literal Literal::geometry_ref(const Iri& feature) { return {feature.str(), Datatype::wkt_geometry}; }

std::optional<double> Literal::as_number() const noexcept {
  if (datatype_ != Datatype::integer && datatype_ != Datatype::decimal) return std::nullopt;
  std::string_view s = lexical_;
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string format_decimal(double value) {
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) return "0";
  return std::string(buf, ptr);
}

}  // namespace agrihub
