#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "agrihub/core/iri.hpp"

namespace agrihub {

/// WGS84 decimal degrees, planar treatment.
struct LonLat {
  double lon = 0;
  double lat = 0;
  friend bool operator==(const LonLat&, const LonLat&) = default;
};

struct Point {
  LonLat at;
  friend bool operator==(const Point&, const Point&) = default;
};
struct LineString {
  std::vector<LonLat> coords;
  friend bool operator==(const LineString&, const LineString&) = default;
};
/// Single closed exterior ring; no holes.
struct Polygon {
  std::vector<LonLat> ring;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

using Shape = std::variant<Point, LineString, Polygon>;

struct BBox {
  double min_lon = 0, min_lat = 0, max_lon = 0, max_lat = 0;

  bool intersects(const BBox& o) const noexcept {
    return min_lon <= o.max_lon && o.min_lon <= max_lon && min_lat <= o.max_lat && o.min_lat <= max_lat;
  }
  double area() const noexcept { return (max_lon - min_lon) * (max_lat - min_lat); }
  BBox united(const BBox& o) const noexcept;
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Human-readable reason the shape violates an invariant, or nullopt.
std::optional<std::string> shape_problem(const Shape& shape);
std::span<const LonLat> shape_coords(const Shape& shape) noexcept;
BBox bbox_of(const Shape& shape);
BBox bbox_of(std::span<const LonLat> coords);
std::string_view shape_kind(const Shape& shape) noexcept;

/// A positioned geometry tied to an instance and the graph it came from.
struct FeatureGeometry {
  Iri instance;
  Iri graph;
  Shape shape;

  BBox bbox() const { return bbox_of(shape); }
  friend bool operator==(const FeatureGeometry&, const FeatureGeometry&) = default;
};

/// Even-odd rule; points on the boundary count as inside.
bool point_in_polygon(LonLat p, const Polygon& poly);

/// Exact planar intersection test for any pair of shapes.
bool shapes_intersect(const Shape& a, const Shape& b);

/// Meters per degree of latitude in the equirectangular approximation.
inline constexpr double kMetersPerDegree = 111'320.0;

/// Minimum distance in meters from `p` to any vertex or edge of `shape`
/// (0 when inside a polygon), equirectangular at p's latitude.
double distance_meters(LonLat p, const Shape& shape);

struct IouResult {
  double iou = 0;
  bool degenerate = false;
};

inline constexpr int kDefaultIouResolution = 256;

/// Intersection over union by rasterizing both polygons onto a
/// resolution x resolution grid over the union bbox, sampling cell
/// centers. Symmetric in (a, b). Throws validation for resolution < 16.
IouResult grid_iou(const Polygon& a, const Polygon& b, int resolution = kDefaultIouResolution);

}  // namespace agrihub
