#include "agrihub/stores/geometry_json.hpp"

#include "agrihub/core/error.hpp"

namespace agrihub {

namespace {

nlohmann::json coord(LonLat p) { return nlohmann::json::array({p.lon, p.lat}); }

nlohmann::json coord_list(std::span<const LonLat> coords) {
  auto arr = nlohmann::json::array();
  for (auto p : coords) arr.push_back(coord(p));
  return arr;
}

LonLat read_coord(const nlohmann::json& j) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(Errc::parse_error, "coordinate must be [lon, lat]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<LonLat> read_coord_list(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Errc::parse_error, "expected a coordinate array");
  std::vector<LonLat> out;
  out.reserve(j.size());
  for (const auto& c : j) out.push_back(read_coord(c));
  return out;
}

}  // namespace

nlohmann::json shape_to_geojson(const Shape& shape) {
  nlohmann::json g;
  g["type"] = std::string(shape_kind(shape));
  if (const auto* p = std::get_if<Point>(&shape)) {
    g["coordinates"] = coord(p->at);
  } else if (const auto* l = std::get_if<LineString>(&shape)) {
    g["coordinates"] = coord_list(l->coords);
  } else {
    g["coordinates"] = nlohmann::json::array({coord_list(std::get<Polygon>(shape).ring)});
  }
  return g;
}

Shape shape_from_geojson(const nlohmann::json& geometry) {
  if (!geometry.is_object() || !geometry.contains("type") || !geometry["type"].is_string() ||
      !geometry.contains("coordinates"))
    throw Error(Errc::parse_error, "geometry needs 'type' and 'coordinates'");
  const auto type = geometry["type"].get<std::string>();
  const auto& coords = geometry["coordinates"];
  if (type == "Point") return Point{read_coord(coords)};
  if (type == "LineString") return LineString{read_coord_list(coords)};
  if (type == "Polygon") {
    if (!coords.is_array() || coords.empty()) throw Error(Errc::parse_error, "polygon without rings");
    return Polygon{read_coord_list(coords[0])};
  }
  throw Error(Errc::parse_error, "unsupported geometry type '" + type + "'");
}

}  // namespace agrihub
