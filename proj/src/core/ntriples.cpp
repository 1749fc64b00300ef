#include "agrihub/core/ntriples.hpp"

#include <algorithm>
#include <vector>

#include "agrihub/core/error.hpp"

namespace agrihub {

namespace {

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
}

[[noreturn]] void fail(std::string what) { throw Error(Errc::parse_error, std::move(what)); }

void skip_spaces(std::string_view& cursor) {
  while (!cursor.empty() && (cursor.front() == ' ' || cursor.front() == '\t')) cursor.remove_prefix(1);
}

std::string read_bracketed_iri(std::string_view& cursor) {
  if (cursor.empty() || cursor.front() != '<') fail("expected '<'");
  auto end = cursor.find('>');
  if (end == std::string_view::npos) fail("unterminated IRI");
  std::string text(cursor.substr(1, end - 1));
  cursor.remove_prefix(end + 1);
  return text;
}

}  // namespace

std::string format_term(const Term& term) {
  std::string out;
  if (auto* iri = as_iri(term)) {
    out.reserve(iri->str().size() + 2);
    out += '<';
    out += iri->str();
    out += '>';
    return out;
  }
  const auto& lit = std::get<Literal>(term);
  out += '"';
  append_escaped(out, lit.lexical());
  out += "\"^^<";
  out += datatype_iri(lit.datatype());
  out += '>';
  return out;
}

std::string format_triple(const Triple& triple) {
  std::string out = format_term(triple.subject);
  out += ' ';
  out += format_term(triple.predicate);
  out += ' ';
  out += format_term(triple.object);
  out += " .";
  return out;
}

std::string serialize_triples(const NamedGraph& graph) {
  std::vector<std::string> lines;
  lines.reserve(graph.triples.size());
  for (const auto& t : graph.triples) lines.push_back(format_triple(t));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

Term read_term(std::string_view& cursor) {
  skip_spaces(cursor);
  if (cursor.empty()) fail("expected a term");
  if (cursor.front() == '<') {
    auto text = read_bracketed_iri(cursor);
    auto iri = Iri::try_parse(text);
    if (!iri) fail("malformed IRI <" + text + ">");
    return *iri;
  }
  if (cursor.front() != '"') fail("expected '<' or '\"'");
  cursor.remove_prefix(1);
  std::string lexical;
  bool closed = false;
  while (!cursor.empty()) {
    char c = cursor.front();
    cursor.remove_prefix(1);
    if (c == '"') {
      closed = true;
      break;
    }
    if (c == '\\') {
      if (cursor.empty()) fail("dangling escape");
      char e = cursor.front();
      cursor.remove_prefix(1);
      switch (e) {
        case '\\': lexical += '\\'; break;
        case '"': lexical += '"'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 't': lexical += '\t'; break;
        default: fail(std::string("unknown escape \\") + e);
      }
      continue;
    }
    lexical.push_back(c);
  }
  if (!closed) fail("unterminated literal");
  Datatype dt = Datatype::string;
  if (cursor.starts_with("^^")) {
    cursor.remove_prefix(2);
    auto dt_iri = read_bracketed_iri(cursor);
    auto parsed = datatype_from_iri(dt_iri);
    if (!parsed) fail("unsupported datatype <" + dt_iri + ">");
    dt = *parsed;
  }
  if (!lexical_is_valid(dt, lexical))
    fail("'" + lexical + "' is not a valid " + std::string(datatype_name(dt)));
  return Literal(std::move(lexical), dt);
}

Triple parse_triple_line(std::string_view line) {
  std::string_view cursor = line;
  auto s = read_term(cursor);
  auto p = read_term(cursor);
  auto o = read_term(cursor);
  if (!as_iri(s)) fail("subject must be an IRI");
  if (!as_iri(p)) fail("predicate must be an IRI");
  if (cursor != " .") fail("line must end with \" .\"");
  return Triple{std::get<Iri>(std::move(s)), std::get<Iri>(std::move(p)), std::move(o)};
}

TripleSet parse_triples(std::string_view text) {
  TripleSet out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;
    try {
      out.insert(parse_triple_line(line));
    } catch (const Error& e) {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return out;
}

}  // namespace agrihub
