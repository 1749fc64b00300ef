#include "agrihub/parsers/isoxml.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "agrihub/core/error.hpp"
#include "agrihub/parsers/timelog.hpp"
#include "agrihub/parsers/xml_tree.hpp"

namespace agrihub::parsers {

namespace {

struct Keyword {
  std::string_view needle;
  std::string_view device_class;
};

// First match wins; designators are matched lower-cased.
constexpr Keyword kDeviceKeywords[] = {
    {"drill", "sowing"},       {"seed", "sowing"},          {"sow", "sowing"},
    {"planter", "sowing"},     {"sämaschine", "sowing"},    {"saemaschine", "sowing"},
    {"legemaschine", "sowing"},{"spray", "spraying"},       {"spritze", "spraying"},
    {"spreader", "fertilizing"},{"streuer", "fertilizing"}, {"fertili", "fertilizing"},
    {"combine", "harvesting"}, {"harvest", "harvesting"},   {"mähdrescher", "harvesting"},
    {"häcksler", "harvesting"},{"plough", "tillage"},       {"plow", "tillage"},
    {"pflug", "tillage"},      {"grubber", "tillage"},      {"cultivator", "tillage"},
    {"harrow", "tillage"},     {"egge", "tillage"},         {"tractor", "tractor"},
    {"traktor", "tractor"},    {"schlepper", "tractor"},
};

std::optional<double> parse_number(const std::string& text) {
  if (!lexical_is_valid(Datatype::decimal, text)) return std::nullopt;
  return Literal(text, Datatype::decimal).as_number();
}

struct TaskDataBuilder {
  const ParseInput& input;
  ParseOutput out;
  std::map<std::string, Iri> fields, devices;
  std::set<std::string> timelogs_done;

  Iri mint(std::string_view id) { return mint_iri(input.context.instance_ns, id); }

  void warn(std::string w) { out.warnings.push_back(std::move(w)); }

  void skip(const XmlElement& el, std::string_view parent) {
    warn("skipped unsupported element " + el.name + " in " + std::string(parent));
  }

  void add(const Iri& s, const Iri& p, Term o) { out.triples.insert(Triple{s, p, std::move(o)}); }

  std::optional<std::string> id_of(const XmlElement& el) {
    const auto* a = el.attr("A");
    if (!a || a->empty()) {
      warn(el.name + " at byte offset " + std::to_string(el.byte_offset) + " has no id; skipped");
      return std::nullopt;
    }
    return *a;
  }

  std::optional<Polygon> boundary_of(const XmlElement& pfd) {
    const XmlElement* chosen = nullptr;
    for (const auto& pln : pfd.children) {
      if (pln.name != "PLN") continue;
      const auto* type = pln.attr("A");
      if (!chosen || (type && *type == "1" && !(chosen->attr("A") && *chosen->attr("A") == "1"))) chosen = &pln;
    }
    if (!chosen) return std::nullopt;
    const XmlElement* ring = nullptr;
    for (const auto& lsg : chosen->children) {
      if (lsg.name != "LSG") {
        skip(lsg, "PLN");
        continue;
      }
      const auto* type = lsg.attr("A");
      if (!ring || (type && *type == "1" && !(ring->attr("A") && *ring->attr("A") == "1"))) ring = &lsg;
    }
    if (!ring) return std::nullopt;
    Polygon poly;
    for (const auto& pnt : ring->children) {
      if (pnt.name != "PNT") {
        skip(pnt, "LSG");
        continue;
      }
      const auto* north = pnt.attr("C");
      const auto* east = pnt.attr("D");
      auto lat = north ? parse_number(*north) : std::nullopt;
      auto lon = east ? parse_number(*east) : std::nullopt;
      if (!lat || !lon) {
        warn("PNT at byte offset " + std::to_string(pnt.byte_offset) + " lacks numeric C/D; boundary dropped");
        return std::nullopt;
      }
      poly.ring.push_back({*lon, *lat});
    }
    if (!poly.ring.empty() && !(poly.ring.front() == poly.ring.back())) poly.ring.push_back(poly.ring.front());
    if (auto problem = shape_problem(poly)) {
      warn("partfield boundary dropped: " + *problem);
      return std::nullopt;
    }
    return poly;
  }

  void partfield(const XmlElement& el) {
    auto id = id_of(el);
    if (!id) return;
    Iri iri = mint(*id);
    fields.insert_or_assign(*id, iri);
    add(iri, vocab::type, vocab::Field);
    add(iri, vocab::isoxml_id, Literal::string(*id));
    if (const auto* name = el.attr("C"); name && !name->empty()) add(iri, vocab::label, Literal::string(*name));
    if (const auto* area = el.attr("D"); area && !area->empty()) {
      if (lexical_is_valid(Datatype::decimal, *area)) add(iri, vocab::area, Literal(*area, Datatype::decimal));
      else warn("PFD " + *id + ": area '" + *area + "' is not a number");
    }
    for (const auto& child : el.children)
      if (child.name != "PLN") skip(child, "PFD");
    if (auto poly = boundary_of(el)) {
      add(iri, vocab::boundary, Literal::geometry_ref(iri));
      out.geometries.push_back(FeatureGeometry{iri, input.context.graph, std::move(*poly)});
    }
  }

  void device(const XmlElement& el) {
    auto id = id_of(el);
    if (!id) return;
    Iri iri = mint(*id);
    devices.insert_or_assign(*id, iri);
    add(iri, vocab::type, vocab::Device);
    add(iri, vocab::isoxml_id, Literal::string(*id));
    const auto* designator = el.attr("B");
    if (designator && !designator->empty()) add(iri, vocab::label, Literal::string(*designator));
    add(iri, vocab::device_class, Literal::string(classify_device(designator ? *designator : "")));
    for (const auto& child : el.children) skip(child, "DVC");
  }

  void timelog(const Iri& task, const std::string& name) {
    Iri iri = mint(name);
    add(task, vocab::has_timelog, iri);
    add(iri, vocab::type, vocab::Timelog);
    add(iri, vocab::isoxml_id, Literal::string(name));
    if (!timelogs_done.insert(name).second) return;
    const auto* header = input.sibling(name + ".XML");
    const auto* bin = input.sibling(name + ".BIN");
    if (!header || !bin) {
      warn("timelog " + name + " files missing");
      return;
    }
    auto [layout, rows] = parse_isoxml_timelog(*header, *bin);
    add_series(out, iri, std::move(rows));
  }

  void task(const XmlElement& el) {
    auto id = id_of(el);
    if (!id) return;
    Iri iri = mint(*id);
    add(iri, vocab::type, vocab::Task);
    add(iri, vocab::isoxml_id, Literal::string(*id));
    if (const auto* name = el.attr("B"); name && !name->empty()) add(iri, vocab::label, Literal::string(*name));
    if (const auto* pfd = el.attr("E"); pfd && !pfd->empty()) {
      if (auto it = fields.find(*pfd); it != fields.end()) add(iri, vocab::on_field, it->second);
      else warn("dangling reference " + *pfd);
    }
    for (const auto& child : el.children) {
      if (child.name == "DAN") {
        const auto* dvc = child.attr("C");
        if (!dvc || dvc->empty()) {
          warn("DAN in " + *id + " has no device reference");
        } else if (auto it = devices.find(*dvc); it != devices.end()) {
          add(iri, vocab::uses_device, it->second);
        } else {
          warn("dangling reference " + *dvc);
        }
      } else if (child.name == "TLG") {
        const auto* file = child.attr("A");
        if (!file || file->empty()) warn("TLG in " + *id + " has no file name");
        else timelog(iri, *file);
      } else {
        skip(child, "TSK");
      }
    }
  }

  static void add_series(ParseOutput& out, const Iri& iri, std::vector<SeriesRow> rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SeriesRow& a, const SeriesRow& b) { return a.timestamp < b.timestamp; });
    auto dup = std::unique(rows.begin(), rows.end(),
                           [](const SeriesRow& a, const SeriesRow& b) { return a.timestamp == b.timestamp; });
    if (auto dropped = static_cast<std::size_t>(rows.end() - dup); dropped > 0) {
      out.warnings.push_back(iri.str() + ": dropped " + std::to_string(dropped) + " records with repeated timestamps");
      rows.erase(dup, rows.end());
    }
    out.series.push_back({iri, std::move(rows)});
  }
};

}  // namespace

std::string classify_device(std::string_view designator) {
  auto lower = to_lower_ascii(designator);
  for (const auto& k : kDeviceKeywords)
    if (lower.find(k.needle) != std::string::npos) return std::string(k.device_class);
  return "other";
}

ParseOutput parse_isoxml_taskdata(const ParseInput& input) {
  XmlElement root = parse_xml(input.bytes);
  if (root.name != "ISO11783_TaskData")
    throw Error(Errc::parse_error, "root element is " + root.name + ", expected ISO11783_TaskData");
  TaskDataBuilder b{input, {}, {}, {}, {}};
  // Partfields and devices first so task references resolve regardless of
  // document order.
  for (const auto& el : root.children) {
    if (el.name == "PFD") b.partfield(el);
    else if (el.name == "DVC") b.device(el);
  }
  for (const auto& el : root.children) {
    if (el.name == "TSK") b.task(el);
    else if (el.name != "PFD" && el.name != "DVC") b.skip(el, root.name);
  }
  return std::move(b.out);
}

ParseOutput parse_isoxml_taskdata(std::string_view xml) {
  ParseInput input{"TASKDATA.XML", xml, nullptr, {}};
  return parse_isoxml_taskdata(input);
}

ParseOutput parse_timelog_file(const ParseInput& input) {
  std::string base = input.filename;
  if (auto slash = base.find_last_of('/'); slash != std::string::npos) base = base.substr(slash + 1);
  auto dot = base.rfind('.');
  std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
  if (stem.empty()) throw Error(Errc::parse_error, "timelog file name has no stem");
  const auto* header = input.sibling(stem + ".XML");
  if (!header) throw Error(Errc::parse_error, "timelog header " + stem + ".XML not supplied");
  auto [layout, rows] = parse_isoxml_timelog(*header, input.bytes);
  ParseOutput out;
  Iri iri = mint_iri(input.context.instance_ns, stem);
  out.triples.insert({iri, vocab::type, vocab::Timelog});
  out.triples.insert({iri, vocab::isoxml_id, Literal::string(stem)});
  TaskDataBuilder::add_series(out, iri, std::move(rows));
  return out;
}

}  // namespace agrihub::parsers
