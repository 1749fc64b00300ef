#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agrihub/core/iri.hpp"
#include "agrihub/stores/series_store.hpp"

namespace agrihub::parsers {

struct TimelogColumn {
  std::uint8_t dlv_index = 0;
  std::uint16_t ddi = 0;
  Iri property;
  double scale = 1;
  std::string unit;
};

/// Record structure declared by a TLG header (TIM/PTN/DLV).
struct TimelogLayout {
  bool has_position = false;
  std::vector<TimelogColumn> columns;

  const TimelogColumn* column(std::uint8_t dlv_index) const noexcept;
};

/// One row of the shipped DDI table.
struct DdiEntry {
  std::uint16_t ddi;
  std::string_view name;
  double scale;
  std::string_view unit;
};

std::span<const DdiEntry> ddi_table() noexcept;
/// Table entry for `ddi`, or a generic `.../vocab/ddi/XXXX` column with
/// scale 1 for unlisted identifiers.
TimelogColumn column_for_ddi(std::uint16_t ddi, std::uint8_t dlv_index);

/// raw * scale, computed as raw / 10^k when scale is 10^-k so that decimal
/// scale factors introduce no extra rounding.
double apply_scale(std::int32_t raw, double scale) noexcept;

/// Reads the TIM element (as root, or as the first TIM under any root).
TimelogLayout parse_timelog_header(std::string_view xml);

/// Decodes fixed little-endian records: u32 ms-of-day, u16 days since
/// 1980-01-01, [i32 lat, i32 lon] x 1e-7 deg, u8 DLV count, count x {u8
/// index, i32 value}. Rows come back in file order; timestamps are Unix ms.
/// Throws truncated (record ordinal + byte offset) or parse-error for an
/// index outside the layout.
std::vector<SeriesRow> decode_timelog(const TimelogLayout& layout, std::string_view bin);

std::pair<TimelogLayout, std::vector<SeriesRow>> parse_isoxml_timelog(std::string_view header_xml,
                                                                      std::string_view bin);

}  // namespace agrihub::parsers
