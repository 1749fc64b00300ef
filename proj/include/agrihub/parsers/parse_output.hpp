#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agrihub/core/triple.hpp"
#include "agrihub/core/vocab.hpp"
#include "agrihub/stores/geometry.hpp"
#include "agrihub/stores/series_store.hpp"

namespace agrihub::parsers {

struct SeriesData {
  Iri series;
  std::vector<SeriesRow> rows;  // ascending by timestamp
};

/// Everything one source file contributes to the three stores, plus the
/// lenient-parse warnings.
struct ParseOutput {
  TripleSet triples;
  std::vector<FeatureGeometry> geometries;
  std::vector<SeriesData> series;
  std::vector<std::string> warnings;

  std::size_t row_count() const noexcept;
};

/// Where minted instances and emitted features go.
struct ParseContext {
  Iri graph{"urn:agrihub:graph:unbound"};
  Iri instance_ns{std::string(vocab::kDefaultInstanceNs)};
};

/// Other files uploaded together with the primary one, keyed by base name.
using SiblingFiles = std::map<std::string, std::string>;

struct ParseInput {
  std::string filename;
  std::string_view bytes;
  const SiblingFiles* siblings = nullptr;
  ParseContext context;

  /// Case-insensitive sibling lookup by base name.
  const std::string* sibling(std::string_view name) const;
};

/// Names the first geometry/series IRI lacking a typing triple, or whose
/// rows are not ascending; nullopt when the output is referentially closed.
std::optional<std::string> closure_problem(const ParseOutput& out);

std::string to_lower_ascii(std::string_view text);

}  // namespace agrihub::parsers
