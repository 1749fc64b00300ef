#pragma once

#include <nlohmann/json.hpp>

#include "agrihub/stores/geometry.hpp"

namespace agrihub {

/// GeoJSON geometry object ({"type", "coordinates"}); polygons carry one ring.
nlohmann::json shape_to_geojson(const Shape& shape);
/// Throws parse-error on a malformed object or unsupported type.
Shape shape_from_geojson(const nlohmann::json& geometry);

}  // namespace agrihub
