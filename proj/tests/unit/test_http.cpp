#include <gtest/gtest.h>
#include <httplib.h>

#include "agrihub/api/http_server.hpp"
#include "agrihub/api/platform.hpp"
#include "agrihub/core/iri.hpp"
#include "fixtures.hpp"

using namespace agrihub;
using namespace agrihub::api;
using nlohmann::json;

namespace {

class HttpTest : public ::testing::Test {
 protected:
  HttpTest()
      : platform(fixture::config_for(dir.path() / "data", fixture::path("separation/fallback.geojson"))),
        server(platform) {
    port = server.start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  ~HttpTest() override { server.stop(); }

  httplib::Headers auth(const std::string& token = fixture::kAdmin) {
    return {{"Authorization", "Bearer " + token}};
  }
  httplib::Result post_json(const std::string& path, const json& body, const std::string& token = fixture::kAdmin) {
    return client->Post(path, auth(token), body.dump(), "application/json");
  }
  httplib::Result upload(const std::string& name, const std::string& bytes,
                         const std::vector<std::pair<std::string, std::string>>& siblings = {}) {
    httplib::MultipartFormDataItems items{{"file", bytes, name, "application/octet-stream"}};
    for (const auto& [n, b] : siblings) items.push_back({"sibling", b, n, "application/octet-stream"});
    return client->Post("/files", auth(), items);
  }
  void ingest_isoxml() {
    auto b = fixture::isoxml_bundle();
    std::vector<std::pair<std::string, std::string>> sib(b.siblings.begin(), b.siblings.end());
    auto res = upload("TASKDATA.XML", b.taskdata, sib);
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 201) << res->body;
  }

  fixture::TempDir dir;
  Platform platform;
  HttpServer server;
  int port = 0;
  std::unique_ptr<httplib::Client> client;
};

}  // namespace

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status(Errc::unauthenticated), 401);
  EXPECT_EQ(http_status(Errc::access_denied), 403);
  EXPECT_EQ(http_status(Errc::not_found), 404);
  EXPECT_EQ(http_status(Errc::conflict), 409);
  EXPECT_EQ(http_status(Errc::validation), 400);
  EXPECT_EQ(http_status(Errc::unknown_format), 415);
}

TEST_F(HttpTest, HealthNeedsNoToken) {
  auto res = client->Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST_F(HttpTest, UploadAndQuery) {
  ingest_isoxml();
  auto res = post_json("/query/graph",
                       {{"patterns",
                         {"?t <https://agrihub.example/vocab/usesDevice> ?d",
                          "?d <https://agrihub.example/vocab/deviceClass> \"sowing\""}}});
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  auto body = json::parse(res->body);
  ASSERT_EQ(body["bindings"].size(), 1u);
  EXPECT_EQ(body["bindings"][0]["t"]["value"], "https://agrihub.example/id/file-1/TSK1");

  auto files = client->Get("/files", auth());
  ASSERT_TRUE(files);
  EXPECT_EQ(json::parse(files->body)["files"].size(), 1u);
}

TEST_F(HttpTest, ErrorsCarryCodeAndStatus) {
  auto res = upload("notes.txt", "hello");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 415);
  EXPECT_EQ(json::parse(res->body)["error"], "unknown-format");

  auto anon = client->Post("/query/graph", json{{"patterns", {"?s ?p ?o"}}}.dump(), "application/json");
  ASSERT_TRUE(anon);
  EXPECT_EQ(anon->status, 401);

  auto bad = post_json("/query/graph", {{"patterns", "nope"}});
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto missing = client->Get("/series/" + percent_encode("urn:none") + "/range?from=0&to=1", auth());
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}

TEST_F(HttpTest, ServicesGrantsAndSpatial) {
  ingest_isoxml();
  auto created = post_json("/services", {{"serviceId", "viewer"}, {"grants", json::array()}});
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201) << created->body;
  auto token = json::parse(created->body)["token"].get<std::string>();

  json query{{"geometry", {{"type", "Point"}, {"coordinates", {7.955, 52.273}}}}, {"mode", "intersects"}};
  auto denied = post_json("/query/spatial", query, token);
  ASSERT_TRUE(denied);
  EXPECT_EQ(denied->status, 403);

  json grants = json::array({{{"graphPattern", "urn:agrihub:graph:file:1"}, {"capability", "read-spatial"}}});
  auto put = client->Put("/services/viewer/grants", auth(), grants.dump(), "application/json");
  ASSERT_TRUE(put);
  ASSERT_EQ(put->status, 200) << put->body;

  auto ok = post_json("/query/spatial", query, token);
  ASSERT_TRUE(ok);
  ASSERT_EQ(ok->status, 200) << ok->body;
  EXPECT_EQ(json::parse(ok->body)["features"].size(), 1u);

  auto range = client->Get(
      "/series/" + percent_encode("https://agrihub.example/id/file-1/TLG00001") + "/range?from=0&to=9999999999999",
      auth(token));
  ASSERT_TRUE(range);
  EXPECT_EQ(range->status, 403);
}

TEST_F(HttpTest, SeriesRangeWithColumns) {
  ingest_isoxml();
  auto iri = percent_encode("https://agrihub.example/id/file-1/TLG00001");
  auto col = percent_encode("https://agrihub.example/vocab/ddi/actualWorkingWidth");
  auto res = client->Get("/series/" + iri + "/range?from=0&to=9999999999999&columns=" + col, auth());
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  auto rows = json::parse(res->body)["rows"];
  EXPECT_EQ(rows.size(), 250u);
  for (const auto& r : rows)
    for (auto it = r["values"].begin(); it != r["values"].end(); ++it)
      EXPECT_EQ(it.key(), "https://agrihub.example/vocab/ddi/actualWorkingWidth");
}

TEST_F(HttpTest, FormatsLifecycle) {
  auto list = client->Get("/formats", auth());
  ASSERT_TRUE(list);
  EXPECT_EQ(json::parse(list->body)["formats"].size(), 3u);

  json def{{"formatIri", "https://agrihub.example/formats/weather"},
           {"label", "Weather"},
           {"classes",
            {{{"classIri", "https://agrihub.example/vocab/weather/Obs"},
              {"label", "Observation"},
              {"properties",
               {{{"propertyIri", "https://agrihub.example/vocab/weather/site"},
                 {"label", "site"},
                 {"range", "https://agrihub.example/vocab/weather/Site"},
                 {"cardinality", "required-one"}}}}}}}};
  auto draft = post_json("/formats", def);
  ASSERT_TRUE(draft);
  ASSERT_EQ(draft->status, 201) << draft->body;
  auto iri = percent_encode("https://agrihub.example/formats/weather");
  auto fin = post_json("/formats/" + iri + "/finalize", json::object());
  ASSERT_TRUE(fin);
  EXPECT_EQ(fin->status, 400);
  EXPECT_NE(fin->body.find("weather/Site"), std::string::npos);

  auto comment = post_json("/formats/" + iri + "/comments", {{"author", "agronomist"}, {"body", "add Site"}});
  ASSERT_TRUE(comment);
  EXPECT_EQ(comment->status, 201);
  auto got = client->Get("/formats/" + iri, auth());
  ASSERT_TRUE(got);
  ASSERT_EQ(got->status, 200);
  auto body = json::parse(got->body);
  EXPECT_EQ(body["status"], "draft");
  EXPECT_EQ(body["comments"].size(), 1u);
}

TEST_F(HttpTest, SeparationAndDedupEndpoints) {
  auto res = upload("TLG00010.BIN", fixture::read("separation/TLG00010.BIN"),
                    {{"TLG00010.XML", fixture::read("separation/TLG00010.XML")}});
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  auto run = post_json("/services/separation/run", {{"timelogIri", "https://agrihub.example/id/file-1/TLG00010"}});
  ASSERT_TRUE(run);
  ASSERT_EQ(run->status, 201) << run->body;
  auto body = json::parse(run->body);
  EXPECT_EQ(body["result"]["segments"].size(), 3u);
  auto geo = client->Get("/separation/" + body["runId"].get<std::string>() + "/geojson", auth());
  ASSERT_TRUE(geo);
  EXPECT_EQ(geo->status, 200);
  EXPECT_EQ(json::parse(geo->body)["type"], "FeatureCollection");

  auto dedup = post_json("/links/dedup", json::object());
  ASSERT_TRUE(dedup);
  EXPECT_EQ(dedup->status, 200) << dedup->body;

  auto ann = post_json("/annotations", {{"instance", "https://agrihub.example/id/osm/osm-a"},
                                        {"predicate", "https://agrihub.example/vocab/rainfall"},
                                        {"value", {{"type", "literal"}, {"value", "12.5"}, {"datatype", "decimal"}}}});
  ASSERT_TRUE(ann);
  EXPECT_EQ(ann->status, 201) << ann->body;
}
