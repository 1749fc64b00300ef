#include "agrihub/parsers/geojson.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "agrihub/core/error.hpp"
#include "agrihub/stores/geometry_json.hpp"
#include "agrihub/wikinormia/builtin.hpp"

namespace agrihub::parsers {

namespace {

std::optional<std::string> feature_id(const nlohmann::json& feature) {
  auto it = feature.find("id");
  if (it == feature.end()) return std::nullopt;
  if (it->is_string() && !it->get<std::string>().empty()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  return std::nullopt;
}

}  // namespace

ParseOutput parse_geojson_boundaries(const ParseInput& input) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(input.bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", nlohmann::json()) != "FeatureCollection")
    throw Error(Errc::parse_error, "document is not a GeoJSON FeatureCollection");
  auto features = doc.find("features");
  if (features == doc.end() || !features->is_array())
    throw Error(Errc::parse_error, "FeatureCollection lacks a 'features' array");

  ParseOutput out;
  std::set<Iri> seen;
  std::size_t n = 0;
  for (const auto& feature : *features) {
    const std::string where = "feature " + std::to_string(n++);
    if (!feature.is_object()) {
      out.warnings.push_back(where + ": not an object; skipped");
      continue;
    }
    auto geometry = feature.find("geometry");
    if (geometry == feature.end() || !geometry->is_object()) {
      out.warnings.push_back(where + ": no geometry; skipped");
      continue;
    }
    Shape shape;
    try {
      shape = shape_from_geojson(*geometry);
    } catch (const Error& e) {
      out.warnings.push_back(where + ": " + e.detail() + "; skipped");
      continue;
    }
    if (!std::holds_alternative<Polygon>(shape)) {
      out.warnings.push_back(where + ": " + std::string(shape_kind(shape)) + " geometry skipped");
      continue;
    }
    if (auto bad = shape_problem(shape)) {
      out.warnings.push_back(where + ": " + *bad + "; skipped");
      continue;
    }
    Iri iri = mint_iri(input.context.instance_ns, feature_id(feature).value_or("feature-" + std::to_string(n)));
    if (!seen.insert(iri).second) {
      out.warnings.push_back(where + ": duplicate id " + iri.str() + "; skipped");
      continue;
    }
    out.triples.insert({iri, vocab::type, wikinormia::kGeoJsonBoundaryClass});
    out.triples.insert({iri, vocab::type, vocab::Field});
    out.triples.insert({iri, vocab::boundary, Literal::geometry_ref(iri)});
    if (auto props = feature.find("properties"); props != feature.end() && props->is_object()) {
      if (auto name = props->find("name"); name != props->end() && name->is_string() && !name->get<std::string>().empty())
        out.triples.insert({iri, vocab::label, Literal::string(name->get<std::string>())});
    }
    out.geometries.push_back({iri, input.context.graph, std::move(shape)});
  }
  return out;
}

ParseOutput parse_geojson_boundaries(std::string_view json) {
  return parse_geojson_boundaries(ParseInput{"boundaries.geojson", json, nullptr, {}});
}

}  // namespace agrihub::parsers
