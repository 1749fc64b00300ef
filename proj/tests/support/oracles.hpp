#pragma once

// Test-side reference implementations. None of these call into the code
// under test beyond plain data types.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agrihub/core/triple.hpp"
#include "agrihub/stores/series_store.hpp"
#include "agrihub/stores/triple_store.hpp"

namespace oracle {

using agrihub::BindingSet;
using agrihub::Iri;
using agrihub::Triple;
using agrihub::TriplePattern;

/// Backtracking over the patterns in order, each matched by a linear scan
/// of every triple; no indexes, no reordering.
std::vector<BindingSet> brute_force_bgp(const std::vector<Triple>& triples, const std::vector<TriplePattern>& patterns);

struct Rect {
  double min_lon, min_lat, max_lon, max_lat;
};

/// Closed axis-aligned rectangles overlap (touching counts).
bool rects_overlap(const Rect& a, const Rect& b);
/// Exact IoU of two axis-aligned rectangles.
double rect_iou(const Rect& a, const Rect& b);

/// Equivalence class of `start` by iterating the symmetric, transitive
/// closure of `links` to a fixpoint.
std::set<Iri> closure_fixpoint(const std::vector<std::pair<Iri, Iri>>& links, const Iri& start);

struct RefSegment {
  std::optional<std::string> label;  // nullopt = transfer
  std::size_t begin, end;            // row range [begin, end)
  friend bool operator==(const RefSegment&, const RefSegment&) = default;
};

/// The three segmentation rules applied one after another on plain
/// vectors: split by label and gap, demote short field runs, fuse
/// transfer neighbours not separated by a gap.
std::vector<RefSegment> reference_segments(const std::vector<std::optional<std::string>>& labels,
                                           const std::vector<long long>& timestamps_ms, long long gap_ms,
                                           std::size_t min_rows);

/// One record of a fixture .expected.csv: raw integers as encoded.
struct RawRecord {
  long long unix_ms;
  std::int32_t lat_raw, lon_raw;
  std::vector<std::pair<int, std::int32_t>> dlv;
};
std::vector<RawRecord> read_expected_records(const std::string& csv_text);

}  // namespace oracle
