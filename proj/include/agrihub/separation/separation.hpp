#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agrihub/stores/series_store.hpp"
#include "agrihub/stores/spatial_store.hpp"
#include "agrihub/stores/triple_store.hpp"

namespace agrihub::separation {

inline constexpr std::string_view kTransfer = "transfer";

/// A field IRI, or nullopt for transfer (road trips, unknown ground).
using Label = std::optional<Iri>;

std::string label_text(const Label& label);

struct Params {
  int gap_seconds = 300;
  int min_rows = 10;
};

struct Segment {
  Label label;
  std::vector<SeriesRow> rows;
  EpochMs start_ms = 0;
  EpochMs end_ms = 0;
  Iri source;
};

struct SeparationResult {
  Iri source;
  std::vector<Segment> segments;
  std::map<Iri, Iri> field_series;  // field -> derived series
  std::map<std::string, std::size_t> stats;
  std::vector<FeatureGeometry> boundaries;
};

/// Where boundaries come from. `allowed` filters stored features by graph.
struct BoundarySources {
  const TripleStore& triples;
  const SpatialStore& spatial;
  std::function<bool(const Iri& graph)> allowed;
  std::optional<std::filesystem::path> fallback_file;
  /// Receives the fallback file's parsed features before they are returned;
  /// the platform stores them under the fallback graph.
  std::function<void(const TripleSet&, const std::vector<FeatureGeometry>&)> ingest_fallback;
};

/// Accessible Field polygons intersecting `area`; when there are none, the
/// fallback file's polygons intersecting it. Throws
/// boundaries-unavailable without stored polygons or fallback file.
std::vector<FeatureGeometry> collect_boundaries(const BBox& area, const BoundarySources& sources);

/// Containing field per row; ties go to the smaller bbox area, then the
/// smaller IRI. Unpositioned rows and rows outside every field are transfer.
std::vector<Label> assign_labels(std::span<const SeriesRow> rows, std::span<const FeatureGeometry> fields);

/// Runs of equal label split at gaps longer than gap_seconds; field runs
/// shorter than min_rows become transfer and fuse with neighbouring
/// transfer runs they are not separated from by a gap.
std::vector<Segment> segment(std::span<const SeriesRow> rows, std::span<const Label> labels, const Iri& source,
                             const Params& params = {});

/// IRI of the n-th (1-based) derived series of `timelog`.
Iri derived_series_iri(const Iri& timelog, std::size_t n);
/// Graph receiving derived series and their triples for a file graph.
Iri separation_graph(const Iri& file_graph);

struct Stores {
  TripleStore& triples;
  SpatialStore& spatial;
  SeriesStore& series;
};

/// Full pipeline on one timelog series: labels, segments, one derived
/// series per field (replacing those of earlier runs) and their
/// derivedFrom/onField triples. Throws not-found for an unknown series.
SeparationResult run_separation(const Iri& timelog, Stores stores, const BoundarySources& sources,
                                const Params& params = {});

/// Boundary polygons of the fields present (by IRI), then one Point
/// feature per positioned row in order with label, timestamp and values.
nlohmann::json export_segments_geojson(const SeparationResult& result);

}  // namespace agrihub::separation
