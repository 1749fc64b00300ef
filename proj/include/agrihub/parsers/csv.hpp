#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "agrihub/parsers/parse_output.hpp"
#include "agrihub/wikinormia/format.hpp"

namespace agrihub::parsers {

using CsvRecord = std::vector<std::string>;

/// RFC 4180 records (quoted fields, doubled quotes, CRLF or LF). A leading
/// UTF-8 BOM is dropped; a final empty line is not a record. Throws
/// parse-error for an unterminated quote or text after a closing quote.
std::vector<CsvRecord> parse_csv_records(std::string_view text);

/// The single class of `def` whose properties carry csv columns. Throws
/// schema when there is none or more than one.
const wikinormia::ConceptClass& csv_class(const wikinormia::FormatDefinition& def);

/// Schema-driven parse: one instance per data row. Rows with an
/// unconvertible or missing required cell are skipped with a warning.
/// Throws schema when the header lacks a required column.
ParseOutput parse_csv_with_schema(const wikinormia::FormatDefinition& def, const ParseInput& input);

}  // namespace agrihub::parsers
