#pragma once

#include <string>
#include <string_view>

#include "agrihub/core/triple.hpp"

namespace agrihub {

/// `<iri>` or `"lexical"^^<datatype-iri>` with \\ \" \n \r \t escapes.
std::string format_term(const Term& term);

/// `<s> <p> <o> .`
std::string format_triple(const Triple& triple);

/// One line per triple, LF-terminated, lines sorted bytewise. Byte-stable
/// for equal graphs; the empty graph yields "".
std::string serialize_triples(const NamedGraph& graph);

/// Inverse of serialize_triples. Blank lines are ignored, duplicate lines
/// collapse. Throws parse-error naming the 1-based line number.
TripleSet parse_triples(std::string_view text);

/// Parses a single line (without the trailing LF).
Triple parse_triple_line(std::string_view line);

/// Reads one term from the front of `cursor` and advances past it.
/// A plain `"text"` without datatype is read as a string literal.
Term read_term(std::string_view& cursor);

}  // namespace agrihub
