#include <gtest/gtest.h>

#include "agrihub/api/config.hpp"
#include "agrihub/api/json_codec.hpp"
#include "agrihub/api/platform.hpp"
#include "agrihub/core/error.hpp"
#include "agrihub/core/vocab.hpp"
#include "agrihub/wikinormia/builtin.hpp"
#include "fixtures.hpp"

using namespace agrihub;
using namespace agrihub::api;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::io_error;
}

const std::string kSowing[] = {"?t <https://agrihub.example/vocab/usesDevice> ?d",
                               "?d <https://agrihub.example/vocab/deviceClass> \"sowing\""};

std::vector<TriplePattern> sowing_query() {
  return {parse_pattern(kSowing[0]), parse_pattern(kSowing[1])};
}

class PlatformTest : public ::testing::Test {
 protected:
  PlatformTest() : platform(fixture::config_for(dir.path() / "data", fixture::path("separation/fallback.geojson"))) {}
  IngestReceipt ingest_isoxml() {
    auto b = fixture::isoxml_bundle();
    return platform.ingest_file(fixture::kAdmin, b.taskdata, "TASKDATA.XML", std::nullopt, b.siblings);
  }
  IngestReceipt ingest(const std::string& rel) {
    return platform.ingest_file(fixture::kAdmin, fixture::read(rel), rel.substr(rel.rfind('/') + 1));
  }
  fixture::TempDir dir;
  Platform platform;
};

}  // namespace

TEST(ConfigTest, ParsesAndResolvesPaths) {
  auto c = Config::from_json(nlohmann::json{{"data_dir", "d"}, {"admin_token", "x"}, {"fallback_boundaries", "f.geojson"}},
                             "/base");
  EXPECT_EQ(c.data_dir, std::filesystem::path("/base/d"));
  EXPECT_EQ(*c.fallback_boundaries, std::filesystem::path("/base/f.geojson"));
  EXPECT_DOUBLE_EQ(c.dedup_threshold, 0.7);
  EXPECT_THROW(Config::from_json(nlohmann::json{{"data_dir", "d"}}), Error);
}

TEST(AccountsTest, PrefixGrantsAndJournal) {
  fixture::TempDir dir;
  std::string token;
  {
    AccountStore store(dir.path() / "services.journal");
    token = store.create("svc", {Grant{"urn:agrihub:graph:file:1", Capability::read_graph}});
    EXPECT_EQ(token.size(), 64u);
    EXPECT_EQ(code_of([&] { store.create("svc", {}); }), Errc::conflict);
  }
  AccountStore store(dir.path() / "services.journal");
  EXPECT_TRUE(store.check(token, Capability::read_graph, "urn:agrihub:graph:file:1"));
  EXPECT_TRUE(store.check(token, Capability::read_graph, "urn:agrihub:graph:file:1/separation"));
  EXPECT_FALSE(store.check(token, Capability::read_spatial, "urn:agrihub:graph:file:1"));
  EXPECT_FALSE(store.check(token, Capability::read_graph, "urn:agrihub:graph:file:2"));
  EXPECT_FALSE(store.check("wrong", Capability::read_graph, "urn:agrihub:graph:file:1"));
  EXPECT_NE(store.by_id("svc")->token_hash, token);
  store.set_grants("svc", {});
  EXPECT_FALSE(store.check(token, Capability::read_graph, "urn:agrihub:graph:file:1"));
  EXPECT_EQ(code_of([&] { store.set_grants("nobody", {}); }), Errc::not_found);
}

TEST(CodecTest, TermsRoundTrip) {
  Term a = Iri("urn:x");
  Term b = Literal::decimal(2.5);
  EXPECT_EQ(term_from_json(to_json(a)), a);
  EXPECT_EQ(term_from_json(to_json(b)), b);
  EXPECT_EQ(to_json(b)["datatype"], "decimal");
  EXPECT_THROW(patterns_from_json(nlohmann::json::array({"?a ?b"})), Error);
}

TEST_F(PlatformTest, IsoxmlReceiptAndSowingQuery) {
  auto r = ingest_isoxml();
  EXPECT_EQ(r.file.str(), "urn:agrihub:graph:file:1");
  EXPECT_EQ(r.format, wikinormia::kIsoxmlFormat);
  EXPECT_EQ(r.geometries, 2u);
  EXPECT_EQ(r.series_rows, 500u);
  auto rows = platform.query_graph(fixture::kAdmin, sowing_query());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(std::get<Iri>(rows[0].at("t")).str(), "https://agrihub.example/id/file-1/TSK1");
}

TEST_F(PlatformTest, IngestErrors) {
  EXPECT_EQ(code_of([&] { platform.ingest_file("nobody", "x", "a.txt"); }), Errc::unauthenticated);
  EXPECT_EQ(code_of([&] { platform.ingest_file(fixture::kAdmin, "x", "a.txt"); }), Errc::unknown_format);
  EXPECT_EQ(code_of([&] { platform.ingest_file(fixture::kAdmin, "<ISO11783_TaskData>", "TASKDATA.XML"); }),
            Errc::parse_error);
  EXPECT_TRUE(platform.file_graphs().empty());
}

TEST_F(PlatformTest, DedupAndEquivalents) {
  auto iso = ingest_isoxml();
  auto nrw = ingest("nrw/applications.csv");
  auto links = platform.dedup(fixture::kAdmin, std::nullopt, std::nullopt, std::nullopt);
  ASSERT_EQ(links.size(), 1u);
  EXPECT_DOUBLE_EQ(links[0].iou, 1.0);
  auto eq = platform.equivalents(Iri("https://agrihub.example/id/file-1/PFD1"));
  EXPECT_EQ(eq.size(), 2u);
  EXPECT_EQ(code_of([&] { platform.dedup(fixture::kAdmin, iso.file, std::nullopt, std::nullopt); }), Errc::validation);
  EXPECT_EQ(code_of([&] { platform.dedup("x", std::nullopt, std::nullopt, std::nullopt); }), Errc::unauthenticated);
  EXPECT_TRUE(platform.dedup(fixture::kAdmin, iso.file, nrw.file, 0.7).size() == 1u);
}

TEST_F(PlatformTest, AccessRules) {
  auto iso = ingest_isoxml();
  auto nrw = ingest("nrw/applications.csv");
  auto reader = platform.create_service(fixture::kAdmin, "reader", {Grant{nrw.file.str(), Capability::read_graph}});
  auto none = platform.create_service(fixture::kAdmin, "none", {});
  // Deny by default.
  EXPECT_EQ(code_of([&] { platform.query_graph(none, sowing_query()); }), Errc::access_denied);
  EXPECT_EQ(code_of([&] { platform.query_graph("unknown-token", sowing_query()); }), Errc::unauthenticated);
  // Readable but no match: empty, not denied.
  EXPECT_TRUE(platform.query_graph(reader, sowing_query()).empty());
  EXPECT_EQ(code_of([&] { platform.query_graph(reader, sowing_query(), {iso.file}); }), Errc::access_denied);
  EXPECT_EQ(code_of([&] { platform.query_spatial(reader, Point{{7.955, 52.273}}, SpatialMode::intersects); }),
            Errc::access_denied);
  platform.manage_grants(fixture::kAdmin, "reader",
                         {Grant{nrw.file.str(), Capability::read_graph}, Grant{nrw.file.str(), Capability::read_spatial}});
  auto hits = platform.query_spatial(reader, Point{{7.955, 52.273}}, SpatialMode::intersects);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].graph, nrw.file);
  auto tlg = Iri("https://agrihub.example/id/file-1/TLG00001");
  EXPECT_EQ(code_of([&] { platform.query_timeseries(reader, tlg, 0, 1LL << 50); }), Errc::access_denied);
  EXPECT_EQ(platform.query_timeseries(fixture::kAdmin, tlg, 0, 1LL << 50).size(), 250u);
  EXPECT_EQ(code_of([&] { platform.query_spatial(fixture::kAdmin, Point{{0, 0}}, SpatialMode::within_distance); }),
            Errc::validation);
}

TEST_F(PlatformTest, SeparationRunsAndExports) {
  parsers::SiblingFiles sib{{"TLG00010.XML", fixture::read("separation/TLG00010.XML")}};
  auto log = platform.ingest_file(fixture::kAdmin, fixture::read("separation/TLG00010.BIN"), "TLG00010.BIN",
                                  std::nullopt, sib);
  auto fields = ingest("separation/fields.geojson");
  Iri tlg("https://agrihub.example/id/file-1/TLG00010");
  ASSERT_TRUE(platform.series().contains(tlg));

  auto runner = platform.create_service(
      fixture::kAdmin, "runner",
      {Grant{log.file.str(), Capability::run_service}, Grant{log.file.str(), Capability::read_timeseries}});
  // Without read-spatial on the stored fields the run falls back to the
  // configured boundary file.
  auto run = platform.run_separation(runner, tlg, {});
  EXPECT_EQ(run.run_id, "run-1");
  ASSERT_EQ(run.result.segments.size(), 3u);
  EXPECT_TRUE(run.result.segments[0].label->starts_with("https://agrihub.example/id/osm/"));

  auto run2 = platform.run_separation(fixture::kAdmin, tlg, {});
  EXPECT_EQ(run2.run_id, "run-2");
  EXPECT_TRUE(run2.result.segments[0].label->starts_with("https://agrihub.example/id/file-2/"));

  auto geo = nlohmann::json::parse(platform.separation_geojson(runner, "run-1"));
  EXPECT_EQ(geo["type"], "FeatureCollection");
  EXPECT_EQ(code_of([&] { platform.separation_geojson(runner, "run-9"); }), Errc::not_found);

  auto outsider = platform.create_service(fixture::kAdmin, "outsider",
                                          {Grant{fields.file.str(), Capability::run_service}});
  EXPECT_EQ(code_of([&] { platform.run_separation(outsider, tlg, {}); }), Errc::access_denied);
  EXPECT_EQ(code_of([&] { platform.separation_geojson(outsider, "run-1"); }), Errc::access_denied);
  EXPECT_EQ(code_of([&] { platform.run_separation(runner, Iri("urn:none"), {}); }), Errc::not_found);
}

TEST_F(PlatformTest, VocabularyWrites) {
  wikinormia::FormatDefinition def{Iri("https://agrihub.example/formats/x"), "X", 1, wikinormia::Status::draft, {}, {}};
  def.classes.push_back({Iri("https://agrihub.example/vocab/x/Thing"), "Thing",
                         {{Iri("https://agrihub.example/vocab/x/id"), "id", Datatype::string,
                           wikinormia::Cardinality::required_one, "id"}},
                         std::nullopt});
  platform.create_draft("anyone", def);
  EXPECT_EQ(platform.get_format(def.format).status, wikinormia::Status::draft);
  EXPECT_EQ(platform.finalize("anyone", def.format), 1);
  auto r = platform.ingest_file(fixture::kAdmin, "id\nthing-1\n", "things.csv");
  EXPECT_EQ(r.format, def.format);
  EXPECT_TRUE(platform.triples().has_graph(vocab::wikinormia_graph));
}
