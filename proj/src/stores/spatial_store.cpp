#include "agrihub/stores/spatial_store.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <nlohmann/json.hpp>

#include "agrihub/core/error.hpp"
#include "agrihub/stores/geometry_json.hpp"

namespace agrihub {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using BoxPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using Box = bg::model::box<BoxPoint>;

namespace {

Box to_box(const BBox& b) { return Box{{b.min_lon, b.min_lat}, {b.max_lon, b.max_lat}}; }

struct BoxValueEqual {
  bool operator()(const std::pair<Box, const void*>& a, const std::pair<Box, const void*>& b) const {
    return a.second == b.second;
  }
};

}  // namespace

// Values point at the map node of the feature; std::map nodes are stable.
struct SpatialStore::Index {
  using Value = std::pair<Box, const void*>;
  bgi::rtree<Value, bgi::quadratic<16>, bgi::indexable<Value>, BoxValueEqual> tree;
};

SpatialStore::SpatialStore() : index_(std::make_unique<Index>()) {}

SpatialStore::SpatialStore(std::filesystem::path journal_path) : index_(std::make_unique<Index>()) {
  restore(journal_path);
  journal_ = std::make_unique<JournalWriter>(std::move(journal_path));
}

SpatialStore::~SpatialStore() = default;

void SpatialStore::insert(const FeatureGeometry& feature) { insert(std::span<const FeatureGeometry>(&feature, 1)); }

void SpatialStore::insert(std::span<const FeatureGeometry> features) {
  for (const auto& f : features) {
    if (auto problem = shape_problem(f.shape))
      throw Error(Errc::validation, "feature " + f.instance.str() + ": " + *problem);
  }
  std::unique_lock lock(mutex_);
  std::vector<std::string> lines;
  for (const auto& f : features) {
    insert_locked(f);
    if (journal_) {
      nlohmann::json j{{"graph", f.graph.str()}, {"instance", f.instance.str()},
                       {"geometry", shape_to_geojson(f.shape)}};
      lines.push_back(j.dump());
    }
  }
  if (journal_) journal_->append(lines);
}

void SpatialStore::insert_locked(const FeatureGeometry& feature) {
  Key key{feature.graph, feature.instance};
  auto it = features_.find(key);
  if (it != features_.end()) {
    index_->tree.remove(Index::Value{to_box(it->second.bbox()), &it->second});
    it->second = feature;
  } else {
    it = features_.emplace(key, feature).first;
  }
  index_->tree.insert(Index::Value{to_box(it->second.bbox()), &it->second});
}

std::vector<FeatureGeometry> SpatialStore::query_intersects(const Shape& shape) const {
  if (auto problem = shape_problem(shape)) throw Error(Errc::validation, "query shape: " + *problem);
  std::shared_lock lock(mutex_);
  std::vector<Index::Value> hits;
  index_->tree.query(bgi::intersects(to_box(bbox_of(shape))), std::back_inserter(hits));
  std::vector<FeatureGeometry> out;
  for (const auto& [box, ptr] : hits) {
    const auto& f = *static_cast<const FeatureGeometry*>(ptr);
    if (shapes_intersect(f.shape, shape)) out.push_back(f);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.instance, a.graph) < std::tie(b.instance, b.graph);
  });
  return out;
}

std::vector<FeatureGeometry> SpatialStore::query_within_distance(LonLat point, double meters) const {
  if (!(meters >= 0)) throw Error(Errc::validation, "distance must be >= 0");
  std::shared_lock lock(mutex_);
  // Generous degree envelope around the point; the exact test follows.
  double dlat = meters / kMetersPerDegree * 1.01 + 1e-12;
  double coslat = std::cos(point.lat * std::numbers::pi / 180.0);
  double dlon = coslat > 1e-9 ? dlat / coslat : 360.0;
  BBox env{point.lon - dlon, point.lat - dlat, point.lon + dlon, point.lat + dlat};
  std::vector<Index::Value> hits;
  index_->tree.query(bgi::intersects(to_box(env)), std::back_inserter(hits));
  std::vector<std::pair<double, const FeatureGeometry*>> ranked;
  for (const auto& [box, ptr] : hits) {
    const auto* f = static_cast<const FeatureGeometry*>(ptr);
    double d = distance_meters(point, f->shape);
    if (d <= meters) ranked.emplace_back(d, f);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return std::tie(a.second->instance, a.second->graph) < std::tie(b.second->instance, b.second->graph);
  });
  std::vector<FeatureGeometry> out;
  for (const auto& [d, f] : ranked) out.push_back(*f);
  return out;
}

std::optional<FeatureGeometry> SpatialStore::get(const Iri& graph, const Iri& instance) const {
  std::shared_lock lock(mutex_);
  auto it = features_.find(Key{graph, instance});
  if (it == features_.end()) return std::nullopt;
  return it->second;
}

std::vector<FeatureGeometry> SpatialStore::by_instance(const Iri& instance) const {
  std::shared_lock lock(mutex_);
  std::vector<FeatureGeometry> out;
  for (const auto& [key, f] : features_)
    if (key.second == instance) out.push_back(f);
  return out;
}

std::vector<FeatureGeometry> SpatialStore::in_graph(const Iri& graph) const {
  std::shared_lock lock(mutex_);
  std::vector<FeatureGeometry> out;
  for (const auto& [key, f] : features_)
    if (key.first == graph) out.push_back(f);
  return out;
}

std::vector<FeatureGeometry> SpatialStore::all() const {
  std::shared_lock lock(mutex_);
  std::vector<FeatureGeometry> out;
  for (const auto& [key, f] : features_) out.push_back(f);
  return out;
}

std::size_t SpatialStore::size() const {
  std::shared_lock lock(mutex_);
  return features_.size();
}

void SpatialStore::restore(const std::filesystem::path& path) {
  replay_journal(path, [&](std::string_view line, std::size_t) {
    auto j = nlohmann::json::parse(line);
    FeatureGeometry f{Iri(j.at("instance").get<std::string>()), Iri(j.at("graph").get<std::string>()),
                      shape_from_geojson(j.at("geometry"))};
    if (auto problem = shape_problem(f.shape)) throw Error(Errc::validation, *problem);
    insert_locked(f);
  });
}

}  // namespace agrihub
