#include "agrihub/api/json_codec.hpp"

#include "agrihub/core/error.hpp"
#include "agrihub/stores/geometry_json.hpp"

namespace agrihub::api {

using nlohmann::json;

nlohmann::json to_json(const Term& term) {
  if (const auto* iri = std::get_if<Iri>(&term)) return {{"type", "iri"}, {"value", iri->str()}};
  const auto& lit = std::get<Literal>(term);
  return {{"type", "literal"}, {"value", lit.lexical()}, {"datatype", std::string(datatype_name(lit.datatype()))}};
}

Term term_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.contains("value") || !j["value"].is_string())
    throw Error(Errc::validation, "term needs 'type' and string 'value'");
  const auto type = j["type"].get<std::string>();
  const auto value = j["value"].get<std::string>();
  if (type == "iri") return Iri(value);
  if (type != "literal") throw Error(Errc::validation, "term type must be iri or literal");
  auto dt = datatype_from_name(j.value("datatype", std::string("string")));
  if (!dt) throw Error(Errc::validation, "unknown datatype");
  return Literal(value, *dt);
}

nlohmann::json to_json(const BindingSet& b) {
  json out = json::object();
  for (const auto& [name, term] : b) out[name] = to_json(term);
  return out;
}

nlohmann::json to_json(const FeatureGeometry& f) {
  const auto b = f.bbox();
  return {{"instance", f.instance.str()},
          {"graph", f.graph.str()},
          {"geometry", shape_to_geojson(f.shape)},
          {"bbox", {b.min_lon, b.min_lat, b.max_lon, b.max_lat}}};
}

nlohmann::json to_json(const SeriesRow& r) {
  json values = json::object();
  for (const auto& [col, v] : r.values) values[col.str()] = v;
  json pos = r.position ? json::array({r.position->lon, r.position->lat}) : json(nullptr);
  return {{"timestamp", r.timestamp}, {"time", format_datetime(r.timestamp)}, {"position", pos}, {"values", values}};
}

nlohmann::json to_json(const linker::DuplicatePair& p) {
  return {{"a", p.a.str()}, {"b", p.b.str()}, {"iou", p.iou}};
}

nlohmann::json to_json(const IngestReceipt& r) {
  json links = json::array();
  for (const auto& p : r.links) links.push_back(to_json(p));
  return {{"fileIri", r.file.str()},
          {"formatIri", r.format.str()},
          {"counts", {{"triples", r.triples}, {"geometries", r.geometries}, {"seriesRows", r.series_rows}}},
          {"warnings", r.warnings},
          {"links", links}};
}

nlohmann::json to_json(const ServiceAccount& a) {
  json grants = json::array();
  for (const auto& g : a.grants) grants.push_back(to_json(g));
  return {{"serviceId", a.service_id}, {"grants", grants}};
}

nlohmann::json to_json(const wikinormia::FormatSummary& s) {
  return {{"formatIri", s.format.str()},
          {"label", s.label},
          {"status", std::string(wikinormia::to_string(s.status))},
          {"version", s.version}};
}

nlohmann::json to_json(const separation::SeparationResult& r) {
  json segments = json::array();
  for (const auto& s : r.segments)
    segments.push_back({{"label", separation::label_text(s.label)},
                        {"rows", s.rows.size()},
                        {"startMs", s.start_ms},
                        {"endMs", s.end_ms}});
  json field_series = json::object();
  for (const auto& [field, series] : r.field_series) field_series[field.str()] = series.str();
  return {{"sourceSeries", r.source.str()}, {"segments", segments}, {"fieldSeries", field_series}, {"stats", r.stats}};
}

std::vector<TriplePattern> patterns_from_json(const nlohmann::json& patterns) {
  if (!patterns.is_array() || patterns.empty()) throw Error(Errc::validation, "patterns must be a non-empty array");
  std::vector<TriplePattern> out;
  for (const auto& p : patterns) {
    if (!p.is_string()) throw Error(Errc::validation, "each pattern is an \"s p o\" string");
    try {
      out.push_back(parse_pattern(p.get<std::string>()));
    } catch (const Error& e) {
      throw Error(Errc::validation, "pattern '" + p.get<std::string>() + "': " + e.detail());
    }
  }
  return out;
}

std::vector<Grant> grants_from_json(const nlohmann::json& grants) {
  if (!grants.is_array()) throw Error(Errc::validation, "grants must be an array");
  std::vector<Grant> out;
  for (const auto& g : grants) out.push_back(grant_from_json(g));
  return out;
}

Iri iri_from_json(const nlohmann::json& j, std::string_view field) {
  auto it = j.find(std::string(field));
  if (!j.is_object() || it == j.end() || !it->is_string())
    throw Error(Errc::validation, "field '" + std::string(field) + "' must be an IRI string");
  return Iri(it->get<std::string>());
}

}  // namespace agrihub::api
