#pragma once

#include "agrihub/parsers/parse_output.hpp"

namespace agrihub::parsers {

/// A FeatureCollection of Polygon features, each becoming a Field-typed
/// boundary instance named by the feature id (else feature-<n>) and
/// labelled by properties.name. Other geometries are skipped with a
/// warning. Throws parse-error for invalid JSON or a non-collection.
ParseOutput parse_geojson_boundaries(const ParseInput& input);
ParseOutput parse_geojson_boundaries(std::string_view json);

}  // namespace agrihub::parsers
