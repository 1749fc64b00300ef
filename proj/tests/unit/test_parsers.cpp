#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "agrihub/core/error.hpp"
#include "agrihub/core/vocab.hpp"
#include "agrihub/parsers/csv.hpp"
#include "agrihub/parsers/geojson.hpp"
#include "agrihub/parsers/isoxml.hpp"
#include "agrihub/parsers/registry.hpp"
#include "agrihub/parsers/timelog.hpp"
#include "agrihub/parsers/wkt.hpp"
#include "agrihub/wikinormia/builtin.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace agrihub;
using namespace agrihub::parsers;

namespace {

std::string hex_bytes(std::initializer_list<int> bytes) {
  std::string s;
  for (int b : bytes) s.push_back(static_cast<char>(b));
  return s;
}

TimelogLayout one_column_layout(std::uint16_t ddi) {
  TimelogLayout layout;
  layout.has_position = true;
  layout.columns.push_back(column_for_ddi(ddi, 0));
  return layout;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::io_error;
}

const Iri kWidth{"https://agrihub.example/vocab/ddi/actualWorkingWidth"};
const Iri kRate{"https://agrihub.example/vocab/ddi/setpointVolumePerAreaApplicationRate"};

}  // namespace

TEST(Timelog, DecodesDocumentedRecord) {
  auto bin = hex_bytes({0x00, 0x5E, 0xD0, 0x02, 0xB0, 0x36, 0x78, 0x7C, 0x28, 0x1F,
                        0x40, 0xF7, 0xFB, 0x02, 0x01, 0x00, 0xE8, 0x03, 0x00, 0x00});
  auto rows = decode_timelog(one_column_layout(0x0043), bin);
  ASSERT_EQ(rows.size(), 1u);
  // 14000 days after 1980-01-01 plus 47209984 ms.
  EXPECT_EQ(rows[0].timestamp, 315532800000LL + 14000LL * 86400000LL + 47209984LL);
  ASSERT_TRUE(rows[0].position);
  EXPECT_EQ(rows[0].position->lat, 522747000 / 1e7);
  EXPECT_EQ(rows[0].position->lon, 50067264 / 1e7);
  EXPECT_EQ(rows[0].values.at(kWidth), 1000.0);
}

TEST(Timelog, ScaledColumnDividesByPowerOfTen) {
  auto bin = hex_bytes({0x00, 0x5E, 0xD0, 0x02, 0xB0, 0x36, 0x78, 0x7C, 0x28, 0x1F,
                        0x40, 0xF7, 0xFB, 0x02, 0x01, 0x00, 0xE8, 0x03, 0x00, 0x00});
  auto rows = decode_timelog(one_column_layout(0x0001), bin);
  EXPECT_EQ(rows[0].values.at(kRate), 10.0);
  EXPECT_EQ(apply_scale(7, 0.01), 0.07);
  EXPECT_EQ(apply_scale(-123456, 0.001), -123.456);
}

TEST(Timelog, TruncatedRecordNamesOrdinal) {
  auto full = fixture::encode_record(1000, 14000, std::make_pair(1, 2), {{0, 5}});
  auto bin = full + full.substr(0, full.size() - 2);
  try {
    decode_timelog(one_column_layout(0x0043), bin);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::truncated);
    EXPECT_NE(e.detail().find("record 1"), std::string::npos) << e.detail();
  }
  EXPECT_EQ(code_of([&] { decode_timelog(one_column_layout(0x0043), full.substr(0, 3)); }), Errc::truncated);
  EXPECT_TRUE(decode_timelog(one_column_layout(0x0043), "").empty());
}

TEST(Timelog, UndeclaredDlvIndexIsParseError) {
  auto bin = fixture::encode_record(1000, 14000, std::make_pair(1, 2), {{3, 5}});
  EXPECT_EQ(code_of([&] { decode_timelog(one_column_layout(0x0043), bin); }), Errc::parse_error);
}

TEST(Timelog, HeaderWithoutPosition) {
  auto layout = parse_timelog_header(R"(<TIM A="" D="4"><DLV A="0074" B="" C="DET-1"/></TIM>)");
  EXPECT_FALSE(layout.has_position);
  ASSERT_EQ(layout.columns.size(), 1u);
  EXPECT_EQ(layout.columns[0].ddi, 0x0074);
  auto bin = fixture::encode_record(5, 1, std::nullopt, {{0, -9}});
  auto rows = decode_timelog(layout, bin);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].position);
  EXPECT_EQ(rows[0].values.begin()->second, -9.0);
}

TEST(Timelog, FixtureRecordsMatchExpectedCsv) {
  for (std::string name : {"TLG00001", "TLG00002"}) {
    auto [layout, rows] = parse_isoxml_timelog(fixture::read("isoxml/" + name + ".XML"),
                                               fixture::read("isoxml/" + name + ".BIN"));
    auto expected = oracle::read_expected_records(fixture::read("isoxml/" + name + ".expected.csv"));
    ASSERT_EQ(rows.size(), expected.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i].timestamp, expected[i].unix_ms);
      ASSERT_TRUE(rows[i].position);
      EXPECT_EQ(rows[i].position->lat, expected[i].lat_raw / 1e7);
      EXPECT_EQ(rows[i].values.size(), expected[i].dlv.size());
    }
  }
}

TEST(Isoxml, ClassifiesDevices) {
  EXPECT_EQ(classify_device("Amazone Drillmaschine D9"), "sowing");
  EXPECT_EQ(classify_device("Feldspritze UX 5201"), "spraying");
  EXPECT_EQ(classify_device("Fendt Traktor 724"), "tractor");
  EXPECT_EQ(classify_device("Mystery box"), "other");
}

TEST(Isoxml, FixtureInventory) {
  auto bundle = fixture::isoxml_bundle();
  ParseInput in{"TASKDATA.XML", bundle.taskdata, &bundle.siblings, {}};
  auto out = parse_isoxml_taskdata(in);
  EXPECT_EQ(out.geometries.size(), 2u);
  ASSERT_EQ(out.series.size(), 2u);
  EXPECT_EQ(out.row_count(), 500u);
  EXPECT_FALSE(closure_problem(out));
  std::size_t tasks = 0, devices = 0, fields = 0;
  for (const auto& t : out.triples) {
    if (t.predicate != vocab::type) continue;
    const auto& o = std::get<Iri>(t.object);
    tasks += o == vocab::Task;
    devices += o == vocab::Device;
    fields += o == vocab::Field;
  }
  EXPECT_EQ(tasks, 2u);
  EXPECT_EQ(devices, 3u);
  EXPECT_EQ(fields, 2u);
}

TEST(Isoxml, DanglingReferencesAndUnknownElementsWarn) {
  auto out = parse_isoxml_taskdata(R"(<ISO11783_TaskData>
    <XYZ A="1"/>
    <TSK A="TSK1" E="PFD9"><DAN A="0" C="DVC7"/></TSK>
  </ISO11783_TaskData>)");
  EXPECT_EQ(out.warnings.size(), 3u);
  EXPECT_FALSE(closure_problem(out));
}

TEST(Isoxml, MalformedXmlIsParseError) {
  EXPECT_EQ(code_of([] { parse_isoxml_taskdata("<ISO11783_TaskData><TSK>"); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { parse_isoxml_taskdata("<Other/>"); }), Errc::parse_error);
}

TEST(Isoxml, StandaloneTimelog) {
  SiblingFiles sib{{"TLG00001.XML", fixture::read("isoxml/TLG00001.XML")}};
  auto bin = fixture::read("isoxml/TLG00001.BIN");
  ParseInput in{"TLG00001.BIN", bin, &sib, {}};
  auto out = parse_timelog_file(in);
  ASSERT_EQ(out.series.size(), 1u);
  EXPECT_EQ(out.series[0].rows.size(), 250u);
  EXPECT_FALSE(closure_problem(out));
}

TEST(Wkt, RoundTripAndErrors) {
  auto poly = parse_wkt("polygon ((0 0, 1 0, 1 1, 0 1, 0 0))");
  ASSERT_TRUE(std::holds_alternative<Polygon>(poly));
  EXPECT_EQ(parse_wkt(to_wkt(poly)), poly);
  EXPECT_EQ(parse_wkt("POINT (7.5 52.25)"), (Shape{Point{{7.5, 52.25}}}));
  EXPECT_EQ(code_of([] { parse_wkt("POLYGON ((0 0, 1 0, 1 1, 0 0), (0.1 0.1, 0.2 0.1, 0.2 0.2, 0.1 0.1))"); }),
            Errc::parse_error);
  EXPECT_EQ(code_of([] { parse_wkt("CIRCLE (1 2)"); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { parse_wkt("POINT (1)"); }), Errc::parse_error);
}

TEST(Csv, Rfc4180Records) {
  auto recs = parse_csv_records("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0], (CsvRecord{"a", "b"}));
  EXPECT_EQ(recs[1], (CsvRecord{"x,1", "say \"hi\""}));
  EXPECT_EQ(code_of([] { parse_csv_records("\"open"); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { parse_csv_records("\"a\"b"); }), Errc::parse_error);
}

TEST(Csv, NrwFixture) {
  auto def = wikinormia::nrw_application_format();
  auto text = fixture::read("nrw/applications.csv");
  auto out = parse_csv_with_schema(def, ParseInput{"applications.csv", text, nullptr, {}});
  EXPECT_EQ(out.geometries.size(), 2u);
  EXPECT_TRUE(out.warnings.empty());
  EXPECT_FALSE(closure_problem(out));
  auto bad = fixture::read("nrw/applications_bad_row.csv");
  auto out2 = parse_csv_with_schema(def, ParseInput{"applications_bad_row.csv", bad, nullptr, {}});
  EXPECT_EQ(out2.geometries.size(), 2u);
  ASSERT_EQ(out2.warnings.size(), 1u);
  EXPECT_NE(out2.warnings[0].find("row skipped"), std::string::npos);
  EXPECT_EQ(code_of([&] { parse_csv_with_schema(def, ParseInput{"x.csv", "id,crop\n1,wheat\n", nullptr, {}}); }),
            Errc::schema);
}

TEST(GeoJson, BoundariesFixture) {
  auto out = parse_geojson_boundaries(fixture::read("separation/fields.geojson"));
  EXPECT_EQ(out.geometries.size(), 2u);
  EXPECT_FALSE(closure_problem(out));
  auto mixed = parse_geojson_boundaries(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","geometry":{"type":"Point","coordinates":[1,2]},"properties":{}},
    {"type":"Feature","geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]},"properties":null}]})");
  EXPECT_EQ(mixed.geometries.size(), 1u);
  EXPECT_EQ(mixed.warnings.size(), 1u);
  EXPECT_EQ(code_of([] { parse_geojson_boundaries(R"({"type":"Feature"})"); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { parse_geojson_boundaries("{"); }), Errc::parse_error);
}

class Detection : public ::testing::Test {
 protected:
  Detection() : parsers(formats) {
    wikinormia::install_builtin_formats(formats);
    register_builtin_parsers(parsers, formats);
  }
  wikinormia::Registry formats;
  ParserRegistry parsers;
};

TEST_F(Detection, ByNameAndMagic) {
  EXPECT_EQ(parsers.detect_format(fixture::read("isoxml/TASKDATA.XML"), "TASKDATA.XML"), wikinormia::kIsoxmlFormat);
  EXPECT_EQ(parsers.detect_format(fixture::read("nrw/applications.csv"), "applications.csv"),
            wikinormia::kNrwApplicationFormat);
  EXPECT_EQ(parsers.detect_format(fixture::read("separation/fields.geojson"), "fields.geojson"),
            wikinormia::kGeoJsonBoundariesFormat);
  EXPECT_EQ(code_of([&] { parsers.detect_format("hello", "notes.txt"); }), Errc::unknown_format);
  EXPECT_EQ(code_of([&] { parsers.detect_format("<html/>", "page.xml"); }), Errc::unknown_format);
}

TEST_F(Detection, RegistrationRules) {
  auto reg = csv_registration(formats, wikinormia::kNrwApplicationFormat);
  EXPECT_EQ(code_of([&] { parsers.register_parser(reg); }), Errc::conflict);
  reg.format = Iri("https://agrihub.example/formats/none");
  EXPECT_EQ(code_of([&] { parsers.register_parser(reg); }), Errc::not_found);
  EXPECT_EQ(code_of([&] { parsers.parse(reg.format, ParseInput{"a", "", nullptr, {}}); }), Errc::unknown_format);
  EXPECT_TRUE(glob_match("tlg*.bin", "TLG00001.BIN"));
  EXPECT_FALSE(glob_match("*.csv", "a.csv.bak"));
}

TEST_F(Detection, AmbiguousWhenTwoCsvSchemasMatch) {
  auto def = wikinormia::nrw_application_format();
  def.format = Iri("https://agrihub.example/formats/nrw-copy");
  def.status = wikinormia::Status::draft;
  formats.install(def);
  parsers.register_parser(csv_registration(formats, def.format));
  EXPECT_EQ(code_of([&] { parsers.detect_format(fixture::read("nrw/applications.csv"), "applications.csv"); }),
            Errc::ambiguous_format);
}

TEST_F(Detection, RandomBytesGiveStructuredErrorsOnly) {
  std::mt19937 rng(1234);
  const char* names[] = {"TASKDATA.XML", "a.csv", "b.geojson", "TLG00001.BIN"};
  SiblingFiles sib{{"TLG00001.XML", fixture::read("isoxml/TLG00001.XML")}};
  for (int i = 0; i < 400; ++i) {
    std::string bytes(rng() % 200, '\0');
    for (auto& c : bytes) c = static_cast<char>(rng());
    for (const auto& fmt : parsers.formats()) {
      ParseInput in{names[i % 4], bytes, &sib, {}};
      try {
        auto out = parsers.parse(fmt, in);
        EXPECT_FALSE(closure_problem(out));
      } catch (const Error&) {
      }
    }
  }
}
