#include "agrihub/parsers/csv.hpp"

#include <map>
#include <set>

#include "agrihub/core/error.hpp"
#include "agrihub/core/time.hpp"
#include "agrihub/parsers/wkt.hpp"

namespace agrihub::parsers {

using wikinormia::Cardinality;
using wikinormia::ConceptClass;
using wikinormia::FormatDefinition;
using wikinormia::PropertyDef;

std::vector<CsvRecord> parse_csv_records(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool record_open = false;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    record_open = false;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '"' && field.empty()) {
      ++i;
      record_open = true;
      for (;;) {
        if (i >= text.size()) throw Error(Errc::parse_error, "CSV: unterminated quoted field at line " + std::to_string(line));
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field += text[i++];
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
        throw Error(Errc::parse_error, "CSV: unexpected character after closing quote at line " + std::to_string(line));
      continue;
    }
    if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      record_open = true;
      ++i;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
      end_record();
    } else {
      field += c;
      record_open = true;
      ++i;
    }
  }
  if (record_open || !field.empty()) end_record();
  return records;
}

const ConceptClass& csv_class(const FormatDefinition& def) {
  const ConceptClass* found = nullptr;
  for (const auto& cls : def.classes) {
    bool has_column = false;
    for (const auto& p : cls.properties) has_column = has_column || p.csv_column.has_value();
    if (!has_column) continue;
    if (found)
      throw Error(Errc::schema, def.format.str() + ": csv columns appear in both " + found->class_iri.str() +
                                    " and " + cls.class_iri.str());
    found = &cls;
  }
  if (!found) throw Error(Errc::schema, def.format.str() + " declares no csv columns");
  return *found;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

struct Column {
  const PropertyDef* property;
  std::size_t index;
};

}  // namespace

ParseOutput parse_csv_with_schema(const FormatDefinition& def, const ParseInput& input) {
  const ConceptClass& cls = csv_class(def);
  auto records = parse_csv_records(input.bytes);
  ParseOutput out;
  if (records.empty()) throw Error(Errc::schema, "CSV has no header row");

  std::map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header.emplace(trim(records[0][i]), i);

  std::vector<Column> columns;
  const PropertyDef* id_property = nullptr;
  for (const auto& p : cls.properties) {
    if (!p.csv_column) continue;
    auto it = header.find(*p.csv_column);
    if (it == header.end()) {
      if (p.cardinality == Cardinality::required_one)
        throw Error(Errc::schema, "CSV header lacks required column '" + *p.csv_column + "'");
      continue;
    }
    columns.push_back({&p, it->second});
    if (p.label == "id") id_property = &p;
  }

  std::set<Iri> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "row " + std::to_string(r);
    if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
    auto cell = [&](const Column& c) { return c.index < rec.size() ? trim(rec[c.index]) : std::string(); };

    std::string local = "row-" + std::to_string(r);
    if (id_property) {
      for (const auto& c : columns)
        if (c.property == id_property) local = cell(c);
      if (local.empty()) {
        out.warnings.push_back(where + ": empty id; row skipped");
        continue;
      }
    }
    Iri instance = mint_iri(input.context.instance_ns, local);
    if (seen.contains(instance)) {
      out.warnings.push_back(where + ": duplicate id '" + local + "'; row skipped");
      continue;
    }

    TripleSet triples;
    std::vector<FeatureGeometry> geometries;
    std::optional<std::string> problem;
    for (const auto& c : columns) {
      const PropertyDef& p = *c.property;
      std::string value = cell(c);
      if (value.empty()) {
        if (p.cardinality == Cardinality::required_one) problem = "column '" + *p.csv_column + "' is empty";
        if (problem) break;
        continue;
      }
      if (const auto* target = std::get_if<Iri>(&p.range)) {
        (void)target;
        auto object = Iri::try_parse(value);
        triples.insert({instance, p.property, object ? *object : mint_iri(input.context.instance_ns, value)});
        continue;
      }
      Datatype dt = std::get<Datatype>(p.range);
      if (dt == Datatype::wkt_geometry) {
        try {
          Shape shape = parse_wkt(value);
          if (auto bad = shape_problem(shape)) throw Error(Errc::validation, *bad);
          geometries.push_back({instance, input.context.graph, std::move(shape)});
          triples.insert({instance, p.property, Literal::geometry_ref(instance)});
        } catch (const Error& e) {
          problem = "column '" + *p.csv_column + "': " + e.detail();
          break;
        }
        continue;
      }
      if (dt == Datatype::boolean) value = to_lower_ascii(value);
      if (!lexical_is_valid(dt, value)) {
        problem = "column '" + *p.csv_column + "' value '" + value + "' is not a valid " +
                  std::string(datatype_name(dt));
        break;
      }
      triples.insert({instance, p.property, Literal(value, dt)});
    }
    if (problem) {
      out.warnings.push_back(where + ": " + *problem + "; row skipped");
      continue;
    }
    seen.insert(instance);
    triples.insert({instance, vocab::type, cls.class_iri});
    if (cls.parent_class) triples.insert({instance, vocab::type, *cls.parent_class});
    out.triples.merge(triples);
    if (geometries.size() > 1) {
      out.warnings.push_back(where + ": several geometry columns; keeping the first");
      geometries.erase(geometries.begin() + 1, geometries.end());
    }
    for (auto& g : geometries) out.geometries.push_back(std::move(g));
  }
  return out;
}

}  // namespace agrihub::parsers
