#include "agrihub/parsers/registry.hpp"

#include <fnmatch.h>

#include <mutex>
#include <set>

#include "agrihub/core/error.hpp"
#include "agrihub/parsers/csv.hpp"
#include "agrihub/parsers/geojson.hpp"
#include "agrihub/parsers/isoxml.hpp"
#include "agrihub/wikinormia/builtin.hpp"

namespace agrihub::parsers {

namespace {

std::string_view base_name(std::string_view path) {
  auto slash = path.find_last_of("/\\");
  return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

std::string_view head(std::string_view bytes, std::size_t n) { return bytes.substr(0, std::min(n, bytes.size())); }

bool ends_with_ci(std::string_view name, std::string_view suffix) {
  return name.size() >= suffix.size() && to_lower_ascii(name.substr(name.size() - suffix.size())) == suffix;
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view name) {
  return ::fnmatch(std::string(pattern).c_str(), std::string(name).c_str(), FNM_CASEFOLD) == 0;
}

bool Matcher::accepts(const ParseInput& input) const {
  auto name = base_name(input.filename);
  bool named = false;
  for (const auto& g : globs) named = named || glob_match(g, name);
  return named && (!magic || magic(input));
}

void ParserRegistry::register_parser(ParserRegistration reg) {
  if (!formats_.exists(reg.format)) throw Error(Errc::not_found, "no format " + reg.format.str());
  if (!formats_.is_final(reg.format))
    throw Error(Errc::precondition, reg.format.str() + " has no final version; parsers attach to final formats");
  std::unique_lock lock(mutex_);
  if (regs_.contains(reg.format)) throw Error(Errc::conflict, "a parser for " + reg.format.str() + " is registered");
  Iri key = reg.format;
  regs_.emplace(std::move(key), std::move(reg));
}

bool ParserRegistry::has_parser(const Iri& format) const {
  std::shared_lock lock(mutex_);
  return regs_.contains(format);
}

Iri ParserRegistry::detect_format(const ParseInput& input) const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> hits;
  for (const auto& [format, reg] : regs_)
    if (reg.matcher.accepts(input)) hits.push_back(format);
  if (hits.empty()) throw Error(Errc::unknown_format, "no parser accepts '" + input.filename + "'");
  if (hits.size() > 1) {
    std::string list;
    for (const auto& h : hits) list += (list.empty() ? "" : ", ") + h.str();
    throw Error(Errc::ambiguous_format, "'" + input.filename + "' matches " + list);
  }
  return hits.front();
}

Iri ParserRegistry::detect_format(std::string_view bytes, std::string_view filename) const {
  return detect_format(ParseInput{std::string(filename), bytes, nullptr, {}});
}

ParseOutput ParserRegistry::parse(const Iri& format, const ParseInput& input) const {
  ParserFn fn;
  {
    std::shared_lock lock(mutex_);
    auto it = regs_.find(format);
    if (it == regs_.end()) throw Error(Errc::unknown_format, "no parser registered for " + format.str());
    fn = it->second.parser;
  }
  return fn(input);
}

std::vector<Iri> ParserRegistry::formats() const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> out;
  for (const auto& [f, r] : regs_) out.push_back(f);
  return out;
}

namespace {

bool header_has_columns(std::string_view text, const std::vector<std::string>& required) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRecord> header;
  try {
    header = parse_csv_records(text.substr(0, text.find('\n')));
  } catch (const Error&) {
    return false;
  }
  if (header.empty()) return false;
  std::set<std::string> names;
  for (const auto& h : header[0]) {
    auto b = h.find_first_not_of(" \t\r");
    if (b != std::string::npos) names.insert(h.substr(b, h.find_last_not_of(" \t\r") - b + 1));
  }
  for (const auto& col : required)
    if (!names.contains(col)) return false;
  return true;
}

}  // namespace

ParserRegistration csv_registration(const wikinormia::Registry& formats, const Iri& format) {
  csv_class(formats.get_format(format));
  auto magic = [&formats, format](const ParseInput& in) {
    std::vector<std::string> required;
    try {
      const auto def = formats.get_format(format);
      for (const auto& p : csv_class(def).properties)
        if (p.csv_column && p.cardinality == wikinormia::Cardinality::required_one) required.push_back(*p.csv_column);
    } catch (const Error&) {
      return false;
    }
    return header_has_columns(in.bytes, required);
  };
  return {format, Matcher{{"*.csv"}, magic},
          [&formats, format](const ParseInput& in) { return parse_csv_with_schema(formats.get_format(format), in); }};
}

void register_builtin_parsers(ParserRegistry& parsers, const wikinormia::Registry& formats) {
  using namespace wikinormia;
  parsers.register_parser(
      {kIsoxmlFormat,
       Matcher{{"TASKDATA.XML", "*.xml", "TLG*.BIN"},
               [](const ParseInput& in) {
                 if (ends_with_ci(in.filename, ".bin")) {
                   auto name = std::string(base_name(in.filename));
                   return in.sibling(name.substr(0, name.size() - 4) + ".XML") != nullptr;
                 }
                 return head(in.bytes, 4096).find("<ISO11783_TaskData") != std::string_view::npos;
               }},
       [](const ParseInput& in) {
         return ends_with_ci(in.filename, ".bin") ? parse_timelog_file(in) : parse_isoxml_taskdata(in);
       }});
  parsers.register_parser({kGeoJsonBoundariesFormat,
                           Matcher{{"*.geojson", "*.json"},
                                   [](const ParseInput& in) {
                                     auto h = head(in.bytes, 4096);
                                     auto first = h.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
                                     return first != std::string_view::npos && h[first] == '{' &&
                                            h.find("FeatureCollection") != std::string_view::npos;
                                   }},
                           [](const ParseInput& in) { return parse_geojson_boundaries(in); }});
  parsers.register_parser(csv_registration(formats, kNrwApplicationFormat));
}

}  // namespace agrihub::parsers
