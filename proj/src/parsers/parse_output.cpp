#include "agrihub/parsers/parse_output.hpp"

#include <algorithm>
#include <set>

namespace agrihub::parsers {

std::size_t ParseOutput::row_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : series) n += s.rows.size();
  return n;
}

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

const std::string* ParseInput::sibling(std::string_view name) const {
  if (!siblings) return nullptr;
  auto wanted = to_lower_ascii(name);
  for (const auto& [k, v] : *siblings)
    if (to_lower_ascii(k) == wanted) return &v;
  return nullptr;
}

std::optional<std::string> closure_problem(const ParseOutput& out) {
  std::set<Iri> typed;
  for (const auto& t : out.triples)
    if (t.predicate == vocab::type) typed.insert(t.subject);
  for (const auto& g : out.geometries)
    if (!typed.contains(g.instance)) return "geometry " + g.instance.str() + " has no typing triple";
  for (const auto& s : out.series) {
    if (!typed.contains(s.series)) return "series " + s.series.str() + " has no typing triple";
    for (std::size_t i = 1; i < s.rows.size(); ++i)
      if (s.rows[i].timestamp <= s.rows[i - 1].timestamp) return "series " + s.series.str() + " is not ascending";
  }
  return std::nullopt;
}

}  // namespace agrihub::parsers
