#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "agrihub/stores/geometry.hpp"
#include "agrihub/stores/journal.hpp"

namespace agrihub {

/// Features keyed by (graph, instance), indexed by bbox in an R-tree.
/// Inserting an existing key replaces the prior shape (last write wins).
class SpatialStore {
 public:
  SpatialStore();
  explicit SpatialStore(std::filesystem::path journal_path);
  ~SpatialStore();
  SpatialStore(const SpatialStore&) = delete;
  SpatialStore& operator=(const SpatialStore&) = delete;

  /// Throws validation when the shape breaks a FeatureGeometry invariant.
  void insert(const FeatureGeometry& feature);
  void insert(std::span<const FeatureGeometry> features);

  /// Features whose geometry intersects `shape`, ordered by instance IRI
  /// then graph.
  std::vector<FeatureGeometry> query_intersects(const Shape& shape) const;
  /// Features within `meters` of `point`, ordered by distance, instance
  /// IRI, graph. Throws validation for negative distances.
  std::vector<FeatureGeometry> query_within_distance(LonLat point, double meters) const;

  std::optional<FeatureGeometry> get(const Iri& graph, const Iri& instance) const;
  std::vector<FeatureGeometry> by_instance(const Iri& instance) const;
  std::vector<FeatureGeometry> in_graph(const Iri& graph) const;
  std::vector<FeatureGeometry> all() const;
  std::size_t size() const;

 private:
  struct Index;
  using Key = std::pair<Iri, Iri>;  // (graph, instance)

  void insert_locked(const FeatureGeometry& feature);
  void restore(const std::filesystem::path& path);

  mutable std::shared_mutex mutex_;
  std::map<Key, FeatureGeometry> features_;
  std::unique_ptr<Index> index_;
  std::unique_ptr<JournalWriter> journal_;
};

}  // namespace agrihub
