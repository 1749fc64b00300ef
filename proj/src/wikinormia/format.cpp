#include "agrihub/wikinormia/format.hpp"

#include "agrihub/core/error.hpp"

namespace agrihub::wikinormia {

std::string_view to_string(Status s) noexcept { return s == Status::draft ? "draft" : "final"; }

std::string_view to_string(Cardinality c) noexcept {
  switch (c) {
    case Cardinality::required_one: return "required-one";
    case Cardinality::optional_one: return "optional-one";
    case Cardinality::many: return "many";
  }
  return "many";
}

std::optional<Status> status_from_string(std::string_view s) noexcept {
  if (s == "draft") return Status::draft;
  if (s == "final") return Status::final;
  return std::nullopt;
}

std::optional<Cardinality> cardinality_from_string(std::string_view s) noexcept {
  for (auto c : {Cardinality::required_one, Cardinality::optional_one, Cardinality::many})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

const ConceptClass* FormatDefinition::find_class(const Iri& iri) const {
  for (const auto& c : classes)
    if (c.class_iri == iri) return &c;
  return nullptr;
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(Errc::validation, std::string("missing field '") + name + "'");
  return j[name];
}

std::string string_field(const nlohmann::json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) throw Error(Errc::validation, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

Iri iri_field(const nlohmann::json& j, const char* name) {
  auto text = string_field(j, name);
  auto iri = Iri::try_parse(text);
  if (!iri) throw Error(Errc::malformed_iri, std::string("field '") + name + "': '" + text + "'");
  return *iri;
}

}  // namespace

nlohmann::json to_json(const Comment& c) {
  return {{"author", c.author}, {"timestamp", format_datetime(c.timestamp)}, {"body", c.body}};
}

Comment comment_from_json(const nlohmann::json& j) {
  Comment c;
  c.author = string_field(j, "author");
  c.body = string_field(j, "body");
  if (j.contains("timestamp")) {
    auto ts = parse_datetime(string_field(j, "timestamp"));
    if (!ts) throw Error(Errc::validation, "comment timestamp must be YYYY-MM-DDTHH:MM:SS.sssZ");
    c.timestamp = *ts;
  }
  return c;
}

nlohmann::json to_json(const FormatDefinition& def, bool include_comments) {
  auto classes = nlohmann::json::array();
  for (const auto& c : def.classes) {
    auto props = nlohmann::json::array();
    for (const auto& p : c.properties) {
      nlohmann::json pj{{"propertyIri", p.property.str()},
                        {"label", p.label},
                        {"cardinality", std::string(to_string(p.cardinality))}};
      if (const auto* dt = std::get_if<Datatype>(&p.range)) pj["range"] = std::string(datatype_name(*dt));
      else pj["range"] = std::get<Iri>(p.range).str();
      if (p.csv_column) pj["csvColumn"] = *p.csv_column;
      props.push_back(std::move(pj));
    }
    nlohmann::json cj{{"classIri", c.class_iri.str()}, {"label", c.label}, {"properties", std::move(props)}};
    if (c.parent_class) cj["parentClass"] = c.parent_class->str();
    classes.push_back(std::move(cj));
  }
  nlohmann::json j{{"formatIri", def.format.str()},
                   {"label", def.label},
                   {"version", def.version},
                   {"status", std::string(to_string(def.status))},
                   {"classes", std::move(classes)}};
  if (include_comments) {
    auto comments = nlohmann::json::array();
    for (const auto& c : def.comments) comments.push_back(to_json(c));
    j["comments"] = std::move(comments);
  }
  return j;
}

FormatDefinition format_from_json(const nlohmann::json& j) {
  FormatDefinition def{iri_field(j, "formatIri"), string_field(j, "label"), 1, Status::draft, {}, {}};
  if (j.contains("version")) {
    if (!j["version"].is_number_integer() || j["version"].get<int>() < 1)
      throw Error(Errc::validation, "version must be a positive integer");
    def.version = j["version"].get<int>();
  }
  if (j.contains("status")) {
    auto st = status_from_string(string_field(j, "status"));
    if (!st) throw Error(Errc::validation, "status must be 'draft' or 'final'");
    def.status = *st;
  }
  const auto& classes = field(j, "classes");
  if (!classes.is_array()) throw Error(Errc::validation, "classes must be an array");
  for (const auto& cj : classes) {
    ConceptClass c{iri_field(cj, "classIri"), cj.contains("label") ? string_field(cj, "label") : "", {}, std::nullopt};
    if (cj.contains("parentClass") && !cj["parentClass"].is_null()) c.parent_class = iri_field(cj, "parentClass");
    if (cj.contains("properties")) {
      if (!cj["properties"].is_array()) throw Error(Errc::validation, "properties must be an array");
      for (const auto& pj : cj["properties"]) {
        auto range_text = string_field(pj, "range");
        Range range = Datatype::string;
        if (auto dt = datatype_from_name(range_text)) range = *dt;
        else if (auto iri = Iri::try_parse(range_text)) range = *iri;
        else throw Error(Errc::validation, "range '" + range_text + "' is neither a datatype nor an IRI");
        auto card = cardinality_from_string(pj.contains("cardinality") ? string_field(pj, "cardinality") : "optional-one");
        if (!card) throw Error(Errc::validation, "cardinality must be required-one, optional-one or many");
        PropertyDef p{iri_field(pj, "propertyIri"), pj.contains("label") ? string_field(pj, "label") : "", range, *card,
                      std::nullopt};
        if (pj.contains("csvColumn") && !pj["csvColumn"].is_null()) p.csv_column = string_field(pj, "csvColumn");
        c.properties.push_back(std::move(p));
      }
    }
    def.classes.push_back(std::move(c));
  }
  if (j.contains("comments")) {
    if (!j["comments"].is_array()) throw Error(Errc::validation, "comments must be an array");
    for (const auto& cj : j["comments"]) def.comments.push_back(comment_from_json(cj));
  }
  return def;
}

}  // namespace agrihub::wikinormia
