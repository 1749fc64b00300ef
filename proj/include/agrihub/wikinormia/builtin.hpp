#pragma once

#include <vector>

#include "agrihub/wikinormia/format.hpp"
#include "agrihub/wikinormia/registry.hpp"

namespace agrihub::wikinormia {

inline const Iri kIsoxmlFormat{"https://agrihub.example/formats/isoxml"};
inline const Iri kNrwApplicationFormat{"https://agrihub.example/formats/nrw-application"};
inline const Iri kGeoJsonBoundariesFormat{"https://agrihub.example/formats/geojson-boundaries"};

inline const Iri kIsoxmlElementClass{"https://agrihub.example/vocab/IsoxmlElement"};
inline const Iri kNrwApplicationClass{"https://agrihub.example/vocab/nrw/FieldApplication"};
inline const Iri kGeoJsonBoundaryClass{"https://agrihub.example/vocab/geojson/Boundary"};

/// ISOXML task data subset: Task, Device, Field, Timelog.
FormatDefinition isoxml_format();
/// NRW agricultural application CSV (id, area_ha, crop, geometry). The
/// column set is a stand-in; the real feed's columns are not published.
FormatDefinition nrw_application_format();
/// Field boundaries as a GeoJSON FeatureCollection of polygons.
FormatDefinition geojson_boundaries_format();

/// Installs the three built-ins as final version 1, ISOXML first so the
/// others can name its Field class as parent.
void install_builtin_formats(Registry& registry);

}  // namespace agrihub::wikinormia
