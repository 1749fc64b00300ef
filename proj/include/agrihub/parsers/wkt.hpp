#pragma once

#include <string>
#include <string_view>

#include "agrihub/stores/geometry.hpp"

namespace agrihub::parsers {

/// POINT, LINESTRING and single-ring POLYGON in lon/lat order,
/// case-insensitive keywords. Throws parse-error.
Shape parse_wkt(std::string_view text);
std::string to_wkt(const Shape& shape);

}  // namespace agrihub::parsers
