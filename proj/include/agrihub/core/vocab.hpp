#pragma once

#include <string_view>

#include "agrihub/core/iri.hpp"

// Shared vocabulary and well-known graph IRIs.
namespace agrihub::vocab {

inline constexpr std::string_view kVocabNs = "https://agrihub.example/vocab/";
inline constexpr std::string_view kDefaultInstanceNs = "https://agrihub.example/id/";
inline constexpr std::string_view kFormatNs = "https://agrihub.example/formats/";


// Properties
inline const Iri type{"https://agrihub.example/vocab/type"};
inline const Iri label{"https://agrihub.example/vocab/label"};
inline const Iri same_as{"https://agrihub.example/vocab/sameAs"};
inline const Iri isoxml_id{"https://agrihub.example/vocab/isoxmlId"};
inline const Iri uses_device{"https://agrihub.example/vocab/usesDevice"};
inline const Iri on_field{"https://agrihub.example/vocab/onField"};
inline const Iri has_timelog{"https://agrihub.example/vocab/hasTimelog"};
inline const Iri device_class{"https://agrihub.example/vocab/deviceClass"};
inline const Iri area{"https://agrihub.example/vocab/area"};
inline const Iri boundary{"https://agrihub.example/vocab/boundary"};
inline const Iri derived_from{"https://agrihub.example/vocab/derivedFrom"};
inline const Iri file_name{"https://agrihub.example/vocab/fileName"};
inline const Iri format{"https://agrihub.example/vocab/format"};

// Classes
inline const Iri Task{"https://agrihub.example/vocab/Task"};
inline const Iri Device{"https://agrihub.example/vocab/Device"};
inline const Iri Field{"https://agrihub.example/vocab/Field"};
inline const Iri Timelog{"https://agrihub.example/vocab/Timelog"};
inline const Iri DerivedSeries{"https://agrihub.example/vocab/DerivedSeries"};
inline const Iri SourceFile{"https://agrihub.example/vocab/SourceFile"};

// Graphs
inline const Iri wikinormia_graph{"urn:agrihub:graph:wikinormia"};
inline const Iri links_graph{"urn:agrihub:graph:links"};
inline const Iri annotations_graph{"urn:agrihub:graph:annotations"};
inline const Iri osm_fallback_graph{"urn:agrihub:graph:osm-fallback"};
inline constexpr std::string_view kFileGraphPrefix = "urn:agrihub:graph:file:";

}  // namespace agrihub::vocab
