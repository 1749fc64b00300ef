#include "agrihub/separation/separation.hpp"

#include <algorithm>

#include "agrihub/core/error.hpp"
#include "agrihub/core/vocab.hpp"
#include "agrihub/parsers/geojson.hpp"
#include "agrihub/stores/geometry_json.hpp"
#include "agrihub/stores/journal.hpp"

namespace agrihub::separation {

namespace {

const Iri kFallbackNs{"https://agrihub.example/id/osm/"};

Polygon box_polygon(BBox b) {
  constexpr double pad = 1e-9;
  b.min_lon -= pad;
  b.min_lat -= pad;
  b.max_lon += pad;
  b.max_lat += pad;
  return Polygon{{{b.min_lon, b.min_lat},
                  {b.max_lon, b.min_lat},
                  {b.max_lon, b.max_lat},
                  {b.min_lon, b.max_lat},
                  {b.min_lon, b.min_lat}}};
}

bool is_field(const TripleStore& triples, const FeatureGeometry& f) {
  return !triples.match(f.graph, f.instance, vocab::type, Term{vocab::Field}).empty();
}

}  // namespace

std::string label_text(const Label& label) { return label ? label->str() : std::string(kTransfer); }

Iri derived_series_iri(const Iri& timelog, std::size_t n) {
  return Iri(timelog.str() + "/field/" + std::to_string(n));
}

Iri separation_graph(const Iri& file_graph) { return Iri(file_graph.str() + "/separation"); }

std::vector<FeatureGeometry> collect_boundaries(const BBox& area, const BoundarySources& sources) {
  const Shape query = box_polygon(area);
  std::vector<FeatureGeometry> out;
  std::set<Iri> seen;
  for (auto& f : sources.spatial.query_intersects(query)) {
    if (!std::holds_alternative<Polygon>(f.shape)) continue;
    if (sources.allowed && !sources.allowed(f.graph)) continue;
    if (!is_field(sources.triples, f) || !seen.insert(f.instance).second) continue;
    out.push_back(std::move(f));
  }
  if (!out.empty()) return out;
  if (!sources.fallback_file)
    throw Error(Errc::boundaries_unavailable, "no stored field boundaries cover the recording and no fallback file is configured");

  const std::string text = read_file(*sources.fallback_file);
  parsers::ParseInput input{sources.fallback_file->filename().string(), text, nullptr,
                            parsers::ParseContext{vocab::osm_fallback_graph, kFallbackNs}};
  auto parsed = parsers::parse_geojson_boundaries(input);
  if (sources.ingest_fallback) sources.ingest_fallback(parsed.triples, parsed.geometries);
  for (auto& f : parsed.geometries)
    if (shapes_intersect(f.shape, query)) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.instance < b.instance; });
  return out;
}

std::vector<Label> assign_labels(std::span<const SeriesRow> rows, std::span<const FeatureGeometry> fields) {
  struct Candidate {
    const Polygon* polygon;
    BBox bbox;
    double area;
    const Iri* iri;
  };
  std::vector<Candidate> candidates;
  for (const auto& f : fields)
    if (const auto* p = std::get_if<Polygon>(&f.shape)) {
      auto b = f.bbox();
      candidates.push_back({p, b, b.area(), &f.instance});
    }
  std::vector<Label> labels;
  labels.reserve(rows.size());
  for (const auto& row : rows) {
    const Candidate* best = nullptr;
    if (row.position) {
      const LonLat p = *row.position;
      for (const auto& c : candidates) {
        if (p.lon < c.bbox.min_lon || p.lon > c.bbox.max_lon || p.lat < c.bbox.min_lat || p.lat > c.bbox.max_lat)
          continue;
        if (!point_in_polygon(p, *c.polygon)) continue;
        if (!best || c.area < best->area || (c.area == best->area && *c.iri < *best->iri)) best = &c;
      }
    }
    labels.push_back(best ? Label(*best->iri) : Label());
  }
  return labels;
}

std::vector<Segment> segment(std::span<const SeriesRow> rows, std::span<const Label> labels, const Iri& source,
                             const Params& params) {
  if (rows.size() != labels.size()) throw Error(Errc::validation, "one label per row required");
  if (params.gap_seconds < 0 || params.min_rows < 0) throw Error(Errc::validation, "gapSeconds and minRows must be >= 0");
  const EpochMs gap_ms = static_cast<EpochMs>(params.gap_seconds) * 1000;
  auto gap_before = [&](std::size_t i) { return i > 0 && rows[i].timestamp - rows[i - 1].timestamp > gap_ms; };

  struct Run {
    Label label;
    std::size_t begin, end;  // [begin, end)
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (runs.empty() || labels[i] != runs.back().label || gap_before(i)) runs.push_back({labels[i], i, i + 1});
    else runs.back().end = i + 1;
  }
  for (auto& r : runs)
    if (r.label && r.end - r.begin < static_cast<std::size_t>(params.min_rows)) r.label.reset();
  std::vector<Run> merged;
  for (const auto& r : runs) {
    if (!merged.empty() && !r.label && !merged.back().label && !gap_before(r.begin)) merged.back().end = r.end;
    else merged.push_back(r);
  }
  std::vector<Segment> out;
  out.reserve(merged.size());
  for (const auto& r : merged) {
    Segment s{r.label, {rows.begin() + r.begin, rows.begin() + r.end}, rows[r.begin].timestamp,
              rows[r.end - 1].timestamp, source};
    out.push_back(std::move(s));
  }
  return out;
}

SeparationResult run_separation(const Iri& timelog, Stores stores, const BoundarySources& sources,
                                const Params& params) {
  auto graph = stores.series.graph_of(timelog);
  if (!graph) throw Error(Errc::not_found, "no series " + timelog.str());
  const auto rows = stores.series.all(timelog);

  SeparationResult result{timelog, {}, {}, {}, {}};
  std::optional<BBox> extent;
  for (const auto& r : rows) {
    if (!r.position) continue;
    BBox b{r.position->lon, r.position->lat, r.position->lon, r.position->lat};
    extent = extent ? extent->united(b) : b;
  }
  if (extent) result.boundaries = collect_boundaries(*extent, sources);
  const auto labels = assign_labels(rows, result.boundaries);
  result.segments = segment(rows, labels, timelog, params);

  std::map<Iri, std::vector<SeriesRow>> per_field;
  std::vector<Iri> order;
  for (const auto& s : result.segments) {
    result.stats[label_text(s.label)] += s.rows.size();
    if (!s.label) continue;
    auto [it, fresh] = per_field.try_emplace(*s.label);
    if (fresh) order.push_back(*s.label);
    it->second.insert(it->second.end(), s.rows.begin(), s.rows.end());
  }

  const Iri sep_graph = separation_graph(*graph);
  TripleSet stale;
  for (const auto& link : stores.triples.match(sep_graph, std::nullopt, vocab::derived_from, Term{timelog})) {
    for (auto& t : stores.triples.match(sep_graph, link.subject, std::nullopt, std::nullopt)) stale.insert(t);
    stores.series.drop(link.subject);
  }
  if (!stale.empty()) stores.triples.remove(sep_graph, stale);

  TripleSet added;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const Iri& field = order[n];
    Iri derived = derived_series_iri(timelog, n + 1);
    stores.series.replace(derived, per_field[field], sep_graph);
    added.insert({derived, vocab::type, vocab::DerivedSeries});
    added.insert({derived, vocab::derived_from, timelog});
    added.insert({derived, vocab::on_field, field});
    result.field_series.emplace(field, derived);
  }
  if (!added.empty()) stores.triples.insert(sep_graph, added);
  return result;
}

nlohmann::json export_segments_geojson(const SeparationResult& result) {
  using nlohmann::json;
  json features = json::array();
  std::map<Iri, const FeatureGeometry*> fields;
  for (const auto& b : result.boundaries)
    if (result.field_series.contains(b.instance)) fields.emplace(b.instance, &b);
  for (const auto& [iri, f] : fields) {
    features.push_back({{"type", "Feature"},
                        {"geometry", shape_to_geojson(f->shape)},
                        {"properties", {{"kind", "boundary"}, {"field", iri.str()}}}});
  }
  for (const auto& s : result.segments) {
    const auto label = label_text(s.label);
    for (const auto& r : s.rows) {
      if (!r.position) continue;
      json props = {{"kind", "point"}, {"label", label}, {"timestamp", r.timestamp},
                    {"time", format_datetime(r.timestamp)}};
      json values = json::object();
      for (const auto& [col, v] : r.values) values[col.str()] = v;
      props["values"] = std::move(values);
      features.push_back({{"type", "Feature"}, {"geometry", shape_to_geojson(Point{*r.position})}, {"properties", props}});
    }
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace agrihub::separation
