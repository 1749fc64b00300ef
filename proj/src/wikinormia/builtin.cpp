#include "agrihub/wikinormia/builtin.hpp"

#include "agrihub/core/vocab.hpp"

namespace agrihub::wikinormia {

namespace {

PropertyDef prop(const Iri& iri, std::string label, Range range, Cardinality card,
                 std::optional<std::string> column = std::nullopt) {
  return PropertyDef{iri, std::move(label), std::move(range), card, std::move(column)};
}

}  // namespace

FormatDefinition isoxml_format() {
  using C = Cardinality;
  FormatDefinition def{kIsoxmlFormat, "ISOXML task data (ISO 11783-10 subset)", 1, Status::draft, {}, {}};
  def.classes.push_back({kIsoxmlElementClass,
                         "ISOXML element",
                         {prop(vocab::isoxml_id, "ISOXML object id", Datatype::string, C::required_one),
                          prop(vocab::label, "designator", Datatype::string, C::optional_one)},
                         std::nullopt});
  def.classes.push_back({vocab::Task,
                         "Task (TSK)",
                         {prop(vocab::uses_device, "uses device", vocab::Device, C::many),
                          prop(vocab::on_field, "on field", vocab::Field, C::optional_one),
                          prop(vocab::has_timelog, "has timelog", vocab::Timelog, C::many)},
                         kIsoxmlElementClass});
  def.classes.push_back({vocab::Device,
                         "Device (DVC)",
                         {prop(vocab::device_class, "device class", Datatype::string, C::required_one)},
                         kIsoxmlElementClass});
  def.classes.push_back({vocab::Field,
                         "Partfield (PFD)",
                         {prop(vocab::area, "area in m2", Datatype::decimal, C::optional_one),
                          prop(vocab::boundary, "boundary", Datatype::wkt_geometry, C::optional_one)},
                         kIsoxmlElementClass});
  def.classes.push_back({vocab::Timelog, "Timelog (TLG)", {}, kIsoxmlElementClass});
  return def;
}

FormatDefinition nrw_application_format() {
  using C = Cardinality;
  FormatDefinition def{kNrwApplicationFormat, "NRW agricultural application", 1, Status::draft, {}, {}};
  def.classes.push_back(
      {kNrwApplicationClass,
       "Field application (Antragsschlag)",
       {prop(Iri("https://agrihub.example/vocab/nrw/id"), "id", Datatype::string, C::required_one, "id"),
        prop(Iri("https://agrihub.example/vocab/nrw/areaHa"), "area (ha)", Datatype::decimal, C::required_one,
             "area_ha"),
        prop(Iri("https://agrihub.example/vocab/nrw/crop"), "crop", Datatype::string, C::optional_one, "crop"),
        prop(vocab::boundary, "geometry", Datatype::wkt_geometry, C::required_one, "geometry")},
       vocab::Field});
  return def;
}

FormatDefinition geojson_boundaries_format() {
  using C = Cardinality;
  FormatDefinition def{kGeoJsonBoundariesFormat, "GeoJSON field boundaries", 1, Status::draft, {}, {}};
  def.classes.push_back({kGeoJsonBoundaryClass,
                         "Field boundary feature",
                         {prop(vocab::label, "name", Datatype::string, C::optional_one),
                          prop(vocab::boundary, "geometry", Datatype::wkt_geometry, C::required_one)},
                         vocab::Field});
  return def;
}

void install_builtin_formats(Registry& registry) {
  registry.install(isoxml_format());
  registry.install(nrw_application_format());
  registry.install(geojson_boundaries_format());
}

}  // namespace agrihub::wikinormia
