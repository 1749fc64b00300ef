#pragma once

#include <string>
#include <string_view>

#include "agrihub/parsers/parse_output.hpp"

namespace agrihub::parsers {

/// Device class keyword for a DVC designator: sowing, spraying,
/// fertilizing, harvesting, tillage, tractor or other.
std::string classify_device(std::string_view designator);

/// TASKDATA.XML: one instance per TSK/PFD/DVC, task links via E
/// (partfield) and DAN C (device), PFD boundary polygons, TLG children as
/// timelog instances. Referenced TLGnnnnn.XML/.BIN pairs are decoded when
/// present among the input's siblings. Unknown elements and dangling
/// references become warnings.
ParseOutput parse_isoxml_taskdata(const ParseInput& input);
ParseOutput parse_isoxml_taskdata(std::string_view xml);

/// A standalone TLGnnnnn.BIN with its TLGnnnnn.XML header sibling.
ParseOutput parse_timelog_file(const ParseInput& input);

}  // namespace agrihub::parsers
