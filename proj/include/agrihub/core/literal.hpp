#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "agrihub/core/iri.hpp"
#include "agrihub/core/time.hpp"

namespace agrihub {

/// The closed set of literal datatypes.
enum class Datatype : std::uint8_t { string, integer, decimal, boolean, date_time, wkt_geometry };

inline constexpr Datatype kAllDatatypes[] = {Datatype::string,  Datatype::integer,   Datatype::decimal,
                                             Datatype::boolean, Datatype::date_time, Datatype::wkt_geometry};

/// Lower-case name used in JSON documents: string, integer, decimal,
/// boolean, datetime, wkt-geometry.
std::string_view datatype_name(Datatype dt) noexcept;
std::optional<Datatype> datatype_from_name(std::string_view name) noexcept;

/// Datatype IRI used in the triple line format.
std::string_view datatype_iri(Datatype dt) noexcept;
std::optional<Datatype> datatype_from_iri(std::string_view iri) noexcept;

bool lexical_is_valid(Datatype dt, std::string_view lexical) noexcept;

/// A typed literal. Geometry literals carry the IRI under which the shape
/// is kept in the spatial store, not coordinates.
class Literal {
 public:
  Literal(std::string lexical, Datatype datatype);

  static Literal string(std::string value) { return {std::move(value), Datatype::string}; }
  static Literal integer(std::int64_t value);
  static Literal decimal(double value);
  static Literal boolean(bool value);
  static Literal date_time(EpochMs ms);
  static Literal geometry_ref(const Iri& feature);

  const std::string& lexical() const noexcept { return lexical_; }
  Datatype datatype() const noexcept { return datatype_; }

  /// Numeric value for integer/decimal literals.
  std::optional<double> as_number() const noexcept;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.lexical_.compare(b.lexical_) <=> 0; c != 0) return c;
    return a.datatype_ <=> b.datatype_;
  }

 private:
  std::string lexical_;
  Datatype datatype_;
};

/// Shortest fixed-notation text of a double ("12.5", "-0.001", "3").
std::string format_decimal(double value);

}  // namespace agrihub
