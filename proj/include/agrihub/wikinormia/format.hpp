#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "agrihub/core/iri.hpp"
#include "agrihub/core/literal.hpp"
#include "agrihub/core/time.hpp"

namespace agrihub::wikinormia {

enum class Status { draft, final };
enum class Cardinality { required_one, optional_one, many };

std::string_view to_string(Status s) noexcept;
std::string_view to_string(Cardinality c) noexcept;
std::optional<Status> status_from_string(std::string_view s) noexcept;
std::optional<Cardinality> cardinality_from_string(std::string_view s) noexcept;

/// A property range is a literal datatype or a class IRI.
using Range = std::variant<Datatype, Iri>;

struct PropertyDef {
  Iri property;
  std::string label;
  Range range;
  Cardinality cardinality = Cardinality::optional_one;
  std::optional<std::string> csv_column;

  friend bool operator==(const PropertyDef&, const PropertyDef&) = default;
};

struct ConceptClass {
  Iri class_iri;
  std::string label;
  std::vector<PropertyDef> properties;
  std::optional<Iri> parent_class;

  friend bool operator==(const ConceptClass&, const ConceptClass&) = default;
};

struct Comment {
  std::string author;
  EpochMs timestamp = 0;
  std::string body;

  friend bool operator==(const Comment&, const Comment&) = default;
};

struct FormatDefinition {
  Iri format;
  std::string label;
  int version = 1;
  Status status = Status::draft;
  std::vector<ConceptClass> classes;
  std::vector<Comment> comments;

  const ConceptClass* find_class(const Iri& iri) const;
  friend bool operator==(const FormatDefinition&, const FormatDefinition&) = default;
};

/// JSON document with the FormatDefinition field names (formatIri, label,
/// version, status, classes[classIri, label, parentClass, properties[
/// propertyIri, label, range, cardinality, csvColumn]], comments[author,
/// timestamp, body]). Datatype ranges are lower-case names.
nlohmann::json to_json(const FormatDefinition& def, bool include_comments = true);
/// Throws validation on missing/ill-typed fields.
FormatDefinition format_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Comment& c);
Comment comment_from_json(const nlohmann::json& j);

}  // namespace agrihub::wikinormia
