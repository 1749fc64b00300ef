#include "agrihub/parsers/timelog.hpp"

#include <cmath>
#include <cstdio>

#include "agrihub/core/error.hpp"
#include "agrihub/core/time.hpp"
#include "agrihub/parsers/xml_tree.hpp"

namespace agrihub::parsers {

namespace {

constexpr DdiEntry kDdiTable[] = {
    {0x0001, "setpointVolumePerAreaApplicationRate", 0.01, "mm3/m2"},
    {0x0002, "actualVolumePerAreaApplicationRate", 0.01, "mm3/m2"},
    {0x0006, "setpointMassPerAreaApplicationRate", 1, "mg/m2"},
    {0x0007, "actualMassPerAreaApplicationRate", 1, "mg/m2"},
    {0x0043, "actualWorkingWidth", 1, "mm"},
    {0x0074, "totalArea", 1, "m2"},
};

const XmlElement* find_tim(const XmlElement& el) {
  if (el.name == "TIM") return &el;
  for (const auto& c : el.children)
    if (auto* t = find_tim(c)) return t;
  return nullptr;
}

// Little-endian cursor with explicit bounds.
class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == bytes_.size(); }
  bool has(std::size_t n) const noexcept { return bytes_.size() - pos_ >= n; }

  std::uint32_t u(std::size_t width) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < width; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += width;
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u(4)); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const TimelogColumn* TimelogLayout::column(std::uint8_t dlv_index) const noexcept {
  for (const auto& c : columns)
    if (c.dlv_index == dlv_index) return &c;
  return nullptr;
}

std::span<const DdiEntry> ddi_table() noexcept { return kDdiTable; }

TimelogColumn column_for_ddi(std::uint16_t ddi, std::uint8_t dlv_index) {
  for (const auto& e : kDdiTable)
    if (e.ddi == ddi)
      return {dlv_index, ddi, Iri("https://agrihub.example/vocab/ddi/" + std::string(e.name)), e.scale,
              std::string(e.unit)};
  char hex[8];
  std::snprintf(hex, sizeof hex, "%04X", ddi);
  return {dlv_index, ddi, Iri(std::string("https://agrihub.example/vocab/ddi/") + hex), 1.0, ""};
}

double apply_scale(std::int32_t raw, double scale) noexcept {
  if (scale > 0 && scale < 1) {
    double k = std::round(-std::log10(scale));
    double divisor = std::pow(10.0, k);
    if (std::abs(1.0 / divisor - scale) <= 1e-12 * scale) return static_cast<double>(raw) / divisor;
  }
  return static_cast<double>(raw) * scale;
}

TimelogLayout parse_timelog_header(std::string_view xml) {
  XmlElement root = parse_xml(xml);
  const XmlElement* tim = find_tim(root);
  if (!tim) throw Error(Errc::parse_error, "timelog header has no TIM element");
  if (const auto* a = tim->attr("A"); !a || !a->empty())
    throw Error(Errc::parse_error, "TIM start time must be logged in the binary (A=\"\")");
  TimelogLayout layout;
  for (const auto& child : tim->children) {
    if (child.name == "PTN") {
      if (layout.has_position) throw Error(Errc::parse_error, "more than one PTN element");
      for (const auto& [k, v] : child.attributes) {
        if (k != "A" && k != "B") throw Error(Errc::parse_error, "unsupported PTN attribute " + k);
        if (!v.empty()) throw Error(Errc::parse_error, "PTN " + k + " must be logged in the binary");
      }
      if (!child.attr("A") || !child.attr("B")) throw Error(Errc::parse_error, "PTN needs both A and B");
      layout.has_position = true;
    } else if (child.name == "DLV") {
      if (layout.columns.size() > 255) throw Error(Errc::parse_error, "more than 256 DLV elements");
      const auto* ddi_text = child.attr("A");
      if (!ddi_text || ddi_text->empty() || ddi_text->size() > 4)
        throw Error(Errc::parse_error, "DLV needs a hex DDI in attribute A");
      std::uint16_t ddi = 0;
      for (char c : *ddi_text) {
        int d = (c >= '0' && c <= '9') ? c - '0' : (c >= 'A' && c <= 'F') ? c - 'A' + 10 : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
        if (d < 0) throw Error(Errc::parse_error, "DLV DDI '" + *ddi_text + "' is not hex");
        ddi = static_cast<std::uint16_t>(ddi * 16 + d);
      }
      auto index = static_cast<std::uint8_t>(layout.columns.size());
      layout.columns.push_back(column_for_ddi(ddi, index));
    } else {
      throw Error(Errc::parse_error, "unsupported element " + child.name + " in TIM");
    }
  }
  return layout;
}

std::vector<SeriesRow> decode_timelog(const TimelogLayout& layout, std::string_view bin) {
  std::vector<SeriesRow> rows;
  Reader in(bin);
  std::size_t record = 0;
  auto need = [&](std::size_t n, std::size_t record_start) {
    if (!in.has(n))
      throw Error(Errc::truncated, "record " + std::to_string(record) + " at byte offset " +
                                       std::to_string(record_start) + " is truncated");
  };
  while (!in.at_end()) {
    std::size_t start = in.offset();
    need(6 + (layout.has_position ? 8 : 0) + 1, start);
    SeriesRow row;
    std::uint32_t ms = in.u(4);
    std::uint32_t days = in.u(2);
    row.timestamp = kIsobusEpochMs + static_cast<EpochMs>(days) * kMsPerDay + static_cast<EpochMs>(ms);
    if (layout.has_position) {
      std::int32_t lat = in.i32();
      std::int32_t lon = in.i32();
      LonLat p{lon / 1e7, lat / 1e7};
      if (p.lat < -90 || p.lat > 90 || p.lon < -180 || p.lon > 180)
        throw Error(Errc::parse_error, "record " + std::to_string(record) + ": position out of range");
      row.position = p;
    }
    auto count = in.u(1);
    need(count * 5u, start);
    for (std::uint32_t i = 0; i < count; ++i) {
      auto index = static_cast<std::uint8_t>(in.u(1));
      std::int32_t raw = in.i32();
      const auto* col = layout.column(index);
      if (!col)
        throw Error(Errc::parse_error, "record " + std::to_string(record) + ": DLV index " + std::to_string(index) +
                                           " is not in the layout");
      row.values.insert_or_assign(col->property, apply_scale(raw, col->scale));
    }
    rows.push_back(std::move(row));
    ++record;
  }
  return rows;
}

std::pair<TimelogLayout, std::vector<SeriesRow>> parse_isoxml_timelog(std::string_view header_xml,
                                                                      std::string_view bin) {
  auto layout = parse_timelog_header(header_xml);
  auto rows = decode_timelog(layout, bin);
  return {std::move(layout), std::move(rows)};
}

}  // namespace agrihub::parsers
