#pragma once

#include <nlohmann/json.hpp>

#include "agrihub/api/platform.hpp"

namespace agrihub::api {

/// {"type":"iri","value":...} or {"type":"literal","value":...,"datatype":...}
nlohmann::json to_json(const Term& term);
Term term_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BindingSet& b);
nlohmann::json to_json(const FeatureGeometry& f);
nlohmann::json to_json(const SeriesRow& r);
nlohmann::json to_json(const IngestReceipt& r);
nlohmann::json to_json(const linker::DuplicatePair& p);
nlohmann::json to_json(const ServiceAccount& a);
nlohmann::json to_json(const wikinormia::FormatSummary& s);
nlohmann::json to_json(const separation::SeparationResult& r);

/// `patterns` is an array of "s p o" strings.
std::vector<TriplePattern> patterns_from_json(const nlohmann::json& patterns);
std::vector<Grant> grants_from_json(const nlohmann::json& grants);
Iri iri_from_json(const nlohmann::json& j, std::string_view field);

}  // namespace agrihub::api
