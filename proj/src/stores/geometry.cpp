#include "agrihub/stores/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "agrihub/core/error.hpp"

namespace agrihub {

namespace {

struct Segment {
  LonLat a, b;
};

double cross(LonLat o, LonLat a, LonLat b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

int orientation(LonLat o, LonLat a, LonLat b) {
  double c = cross(o, a, b);
  if (c > 0) return 1;
  if (c < 0) return -1;
  return 0;
}

// q collinear with [p, r]: is it within the segment's bounding box?
bool within_extent(LonLat p, LonLat q, LonLat r) {
  return q.lon <= std::max(p.lon, r.lon) && q.lon >= std::min(p.lon, r.lon) &&
         q.lat <= std::max(p.lat, r.lat) && q.lat >= std::min(p.lat, r.lat);
}

bool segments_intersect(const Segment& s, const Segment& t) {
  int o1 = orientation(s.a, s.b, t.a);
  int o2 = orientation(s.a, s.b, t.b);
  int o3 = orientation(t.a, t.b, s.a);
  int o4 = orientation(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_extent(s.a, t.a, s.b)) return true;
  if (o2 == 0 && within_extent(s.a, t.b, s.b)) return true;
  if (o3 == 0 && within_extent(t.a, s.a, t.b)) return true;
  if (o4 == 0 && within_extent(t.a, s.b, t.b)) return true;
  return false;
}

// A point is a zero-length segment so every shape reduces to a segment list.
std::vector<Segment> segments_of(const Shape& shape) {
  std::vector<Segment> out;
  auto coords = shape_coords(shape);
  if (coords.size() == 1) {
    out.push_back({coords[0], coords[0]});
    return out;
  }
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) out.push_back({coords[i], coords[i + 1]});
  return out;
}

bool valid_lonlat(LonLat p) {
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= -180 && p.lon <= 180 && p.lat >= -90 &&
         p.lat <= 90;
}

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  double dx = bx - ax, dy = by - ay;
  double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  double cx = ax + t * dx - px, cy = ay + t * dy - py;
  return std::sqrt(cx * cx + cy * cy);
}

}  // namespace

BBox BBox::united(const BBox& o) const noexcept {
  return {std::min(min_lon, o.min_lon), std::min(min_lat, o.min_lat), std::max(max_lon, o.max_lon),
          std::max(max_lat, o.max_lat)};
}

std::span<const LonLat> shape_coords(const Shape& shape) noexcept {
  return std::visit(
      [](const auto& s) -> std::span<const LonLat> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) return {&s.at, 1};
        else if constexpr (std::is_same_v<T, LineString>) return s.coords;
        else return s.ring;
      },
      shape);
}

std::string_view shape_kind(const Shape& shape) noexcept {
  switch (shape.index()) {
    case 0: return "Point";
    case 1: return "LineString";
    default: return "Polygon";
  }
}

std::optional<std::string> shape_problem(const Shape& shape) {
  auto coords = shape_coords(shape);
  for (auto p : coords)
    if (!valid_lonlat(p)) return "coordinate out of WGS84 range";
  if (const auto* line = std::get_if<LineString>(&shape)) {
    if (line->coords.size() < 2) return "line string needs at least 2 coordinates";
  }
  if (const auto* poly = std::get_if<Polygon>(&shape)) {
    if (poly->ring.size() < 4) return "polygon ring needs at least 4 coordinates";
    if (!(poly->ring.front() == poly->ring.back())) return "polygon ring is not closed";
  }
  return std::nullopt;
}

BBox bbox_of(std::span<const LonLat> coords) {
  BBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (auto p : coords) {
    box.min_lon = std::min(box.min_lon, p.lon);
    box.min_lat = std::min(box.min_lat, p.lat);
    box.max_lon = std::max(box.max_lon, p.lon);
    box.max_lat = std::max(box.max_lat, p.lat);
  }
  return box;
}

BBox bbox_of(const Shape& shape) { return bbox_of(shape_coords(shape)); }

bool point_in_polygon(LonLat p, const Polygon& poly) {
  const auto& ring = poly.ring;
  if (ring.size() < 2) return false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (orientation(ring[i], ring[i + 1], p) == 0 && within_extent(ring[i], p, ring[i + 1])) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const auto& a = ring[i];
    const auto& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

bool shapes_intersect(const Shape& a, const Shape& b) {
  if (!bbox_of(a).intersects(bbox_of(b))) return false;
  auto sa = segments_of(a);
  auto sb = segments_of(b);
  for (const auto& s : sa)
    for (const auto& t : sb)
      if (segments_intersect(s, t)) return true;
  // No boundary crossing: one may still lie entirely inside the other.
  if (const auto* poly = std::get_if<Polygon>(&b)) {
    auto ca = shape_coords(a);
    if (!ca.empty() && point_in_polygon(ca[0], *poly)) return true;
  }
  if (const auto* poly = std::get_if<Polygon>(&a)) {
    auto cb = shape_coords(b);
    if (!cb.empty() && point_in_polygon(cb[0], *poly)) return true;
  }
  return false;
}

double distance_meters(LonLat p, const Shape& shape) {
  if (const auto* poly = std::get_if<Polygon>(&shape); poly && point_in_polygon(p, *poly)) return 0.0;
  const double ky = kMetersPerDegree;
  const double kx = kMetersPerDegree * std::cos(p.lat * std::numbers::pi / 180.0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segments_of(shape)) {
    double d = point_segment_distance(0, 0, (s.a.lon - p.lon) * kx, (s.a.lat - p.lat) * ky,
                                      (s.b.lon - p.lon) * kx, (s.b.lat - p.lat) * ky);
    best = std::min(best, d);
  }
  return best;
}

IouResult grid_iou(const Polygon& a, const Polygon& b, int resolution) {
  if (resolution < 16) throw Error(Errc::validation, "grid_iou resolution must be >= 16");
  BBox box = bbox_of(a.ring).united(bbox_of(b.ring));
  double width = box.max_lon - box.min_lon;
  double height = box.max_lat - box.min_lat;
  if (!(width > 0) || !(height > 0)) return {0.0, true};
  BBox ba = bbox_of(a.ring), bb = bbox_of(b.ring);
  long both = 0, either = 0;
  for (int row = 0; row < resolution; ++row) {
    double lat = box.min_lat + (row + 0.5) * height / resolution;
    for (int col = 0; col < resolution; ++col) {
      double lon = box.min_lon + (col + 0.5) * width / resolution;
      LonLat c{lon, lat};
      bool in_a = lon >= ba.min_lon && lon <= ba.max_lon && lat >= ba.min_lat && lat <= ba.max_lat &&
                  point_in_polygon(c, a);
      bool in_b = lon >= bb.min_lon && lon <= bb.max_lon && lat >= bb.min_lat && lat <= bb.max_lat &&
                  point_in_polygon(c, b);
      both += (in_a && in_b);
      either += (in_a || in_b);
    }
  }
  if (either == 0) return {0.0, true};
  return {static_cast<double>(both) / static_cast<double>(either), false};
}

}  // namespace agrihub
