#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "agrihub/core/error.hpp"
#include "agrihub/stores/geometry.hpp"
#include "agrihub/stores/journal.hpp"
#include "agrihub/stores/series_store.hpp"
#include "agrihub/stores/spatial_store.hpp"
#include "agrihub/stores/triple_store.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace agrihub;

namespace {

Iri ex(const std::string& s) { return Iri("https://agrihub.example/id/" + s); }

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}};
}

const Iri kG1("urn:g1");
const Iri kG2("urn:g2");

}  // namespace

TEST(TripleStore, InsertCountsOnlyNewTriples) {
  TripleStore store;
  TripleSet t{{ex("a"), ex("p"), ex("b")}, {ex("a"), ex("p"), Literal::integer(1)}};
  EXPECT_EQ(store.insert(kG1, t), 2u);
  EXPECT_EQ(store.insert(kG1, t), 0u);
  EXPECT_EQ(store.insert(kG2, t), 2u);
  EXPECT_EQ(store.size(kG1), 2u);
  EXPECT_EQ(store.remove(kG1, TripleSet{{ex("a"), ex("p"), ex("b")}}), 1u);
  EXPECT_EQ(store.size(kG1), 1u);
}

TEST(TripleStore, BgpJoinAcrossGraphs) {
  TripleStore store;
  store.insert(kG1, TripleSet{{ex("t1"), ex("uses"), ex("d1")}});
  store.insert(kG2, TripleSet{{ex("d1"), ex("class"), Literal::string("sowing")}});
  std::vector<TriplePattern> q{parse_pattern("?t <https://agrihub.example/id/uses> ?d"),
                               parse_pattern("?d <https://agrihub.example/id/class> \"sowing\"")};
  std::vector<Iri> both{kG1, kG2};
  auto rows = store.bgp(q, both);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(std::get<Iri>(rows[0].at("t")), ex("t1"));
  std::vector<Iri> only1{kG1};
  EXPECT_TRUE(store.bgp(q, only1).empty());
  std::vector<TriplePattern> none;
  EXPECT_THROW(store.bgp(none, both), Error);
}

TEST(TripleStore, RepeatedVariableMustAgree) {
  TripleStore store;
  store.insert(kG1, TripleSet{{ex("a"), ex("p"), ex("a")}, {ex("a"), ex("p"), ex("b")}});
  std::vector<TriplePattern> q{parse_pattern("?x <https://agrihub.example/id/p> ?x")};
  std::vector<Iri> g{kG1};
  auto rows = store.bgp(q, g);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(std::get<Iri>(rows[0].at("x")), ex("a"));
}

TEST(TripleStore, BgpMatchesBruteForceOnRandomGraphs) {
  std::mt19937 rng(99);
  for (int round = 0; round < 40; ++round) {
    std::vector<Triple> triples;
    TripleSet set;
    for (int i = 0; i < 80; ++i) {
      Term o = (rng() % 3 == 0) ? Term(Literal::integer(rng() % 3)) : Term(ex("n" + std::to_string(rng() % 6)));
      set.insert({ex("n" + std::to_string(rng() % 6)), ex("p" + std::to_string(rng() % 3)), o});
    }
    triples.assign(set.begin(), set.end());
    TripleStore store;
    store.insert(kG1, set);
    std::vector<TriplePattern> patterns;
    int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
      auto var = [&] { return PatternTerm(Variable{std::string(1, static_cast<char>('a' + rng() % 3))}); };
      TriplePattern p{var(), rng() % 2 ? PatternTerm(Term(ex("p" + std::to_string(rng() % 3)))) : var(), var()};
      patterns.push_back(p);
    }
    std::vector<Iri> g{kG1};
    EXPECT_EQ(store.bgp(patterns, g), oracle::brute_force_bgp(triples, patterns)) << "round " << round;
  }
}

TEST(TripleStore, JournalRestoresAndTruncationIsCorrupt) {
  fixture::TempDir dir;
  auto path = dir.path() / "graph.journal";
  {
    TripleStore store(path);
    store.insert(kG1, TripleSet{{ex("a"), ex("p"), Literal::string("x \"y\"\n")}});
    store.insert(kG2, TripleSet{{ex("b"), ex("p"), ex("c")}});
    store.remove(kG2, TripleSet{{ex("b"), ex("p"), ex("c")}});
  }
  {
    TripleStore store(path);
    EXPECT_EQ(store.size(kG1), 1u);
    EXPECT_EQ(store.size(kG2), 0u);
  }
  auto text = read_file(path);
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text.substr(0, text.size() - 3);
  try {
    TripleStore store(path);
    FAIL() << "expected corrupt journal";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::corrupt_journal);
  }
}

TEST(Geometry, ShapeProblems) {
  EXPECT_FALSE(shape_problem(Shape{rect(0, 0, 1, 1)}));
  EXPECT_TRUE(shape_problem(Shape{Polygon{{{0, 0}, {1, 0}, {0, 0}}}}));
  EXPECT_TRUE(shape_problem(Shape{Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}}));
  EXPECT_TRUE(shape_problem(Shape{Point{{200, 0}}}));
  EXPECT_TRUE(shape_problem(Shape{LineString{{{0, 0}}}}));
}

TEST(Geometry, PointInPolygonAndIntersections) {
  auto sq = rect(0, 0, 1, 1);
  EXPECT_TRUE(point_in_polygon({0.5, 0.5}, sq));
  EXPECT_TRUE(point_in_polygon({1, 0.5}, sq));
  EXPECT_FALSE(point_in_polygon({1.5, 0.5}, sq));
  EXPECT_TRUE(shapes_intersect(Shape{sq}, Shape{LineString{{{-1, 0.5}, {2, 0.5}}}}));
  EXPECT_TRUE(shapes_intersect(Shape{sq}, Shape{rect(0.2, 0.2, 0.3, 0.3)}));
  EXPECT_FALSE(shapes_intersect(Shape{sq}, Shape{rect(2, 2, 3, 3)}));
  EXPECT_FALSE(shapes_intersect(Shape{LineString{{{0, 0}, {1, 1}}}}, Shape{LineString{{{0, 1}, {0.4, 0.6 + 0.01}}}}));
}

TEST(Geometry, IouAnalyticRectangles) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 30; ++i) {
    double ax = u(rng), ay = u(rng), bx = ax + u(rng) * 0.5, by = ay + u(rng) * 0.5;
    oracle::Rect a{ax, ay, ax + 0.3 + u(rng) * 0.3, ay + 0.3 + u(rng) * 0.3};
    oracle::Rect b{bx, by, bx + 0.3 + u(rng) * 0.3, by + 0.3 + u(rng) * 0.3};
    auto pa = rect(a.min_lon, a.min_lat, a.max_lon, a.max_lat);
    auto pb = rect(b.min_lon, b.min_lat, b.max_lon, b.max_lat);
    auto r = grid_iou(pa, pb);
    EXPECT_NEAR(r.iou, oracle::rect_iou(a, b), 0.02);
    EXPECT_EQ(r.iou, grid_iou(pb, pa).iou);
  }
  EXPECT_DOUBLE_EQ(grid_iou(rect(0, 0, 1, 1), rect(0, 0, 1, 1)).iou, 1.0);
  EXPECT_DOUBLE_EQ(grid_iou(rect(0, 0, 1, 1), rect(5, 5, 6, 6)).iou, 0.0);
  EXPECT_THROW(grid_iou(rect(0, 0, 1, 1), rect(0, 0, 1, 1), 8), Error);
}

TEST(Geometry, DistanceMeters) {
  // One hundredth of a degree of latitude is 1113.2 m.
  EXPECT_NEAR(distance_meters({8.0, 52.01}, Shape{Point{{8.0, 52.0}}}), 1113.2, 1e-6);
  EXPECT_DOUBLE_EQ(distance_meters({0.5, 0.5}, Shape{rect(0, 0, 1, 1)}), 0.0);
}

TEST(SpatialStore, MatchesNaiveScan) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0, 10), w(0.01, 1);
  SpatialStore store;
  std::vector<std::pair<Iri, oracle::Rect>> rects;
  for (int i = 0; i < 300; ++i) {
    double x = u(rng), y = u(rng);
    oracle::Rect r{x, y, x + w(rng), y + w(rng)};
    auto id = ex("f" + std::to_string(i));
    rects.emplace_back(id, r);
    store.insert(FeatureGeometry{id, kG1, rect(r.min_lon, r.min_lat, r.max_lon, r.max_lat)});
  }
  for (int q = 0; q < 50; ++q) {
    double x = u(rng), y = u(rng);
    oracle::Rect qr{x, y, x + w(rng) * 2, y + w(rng) * 2};
    std::set<Iri> expected;
    for (auto& [id, r] : rects)
      if (oracle::rects_overlap(r, qr)) expected.insert(id);
    std::set<Iri> got;
    for (auto& f : store.query_intersects(Shape{rect(qr.min_lon, qr.min_lat, qr.max_lon, qr.max_lat)}))
      got.insert(f.instance);
    EXPECT_EQ(got, expected) << "query " << q;
  }
}

TEST(SpatialStore, WithinDistanceOrderedAndJournaled) {
  fixture::TempDir dir;
  auto path = dir.path() / "spatial.journal";
  {
    SpatialStore store(path);
    store.insert(FeatureGeometry{ex("near"), kG1, Point{{8.0, 52.0005}}});   // ~55.7 m
    store.insert(FeatureGeometry{ex("mid"), kG1, Point{{8.0, 52.0008}}});    // ~89.1 m
    store.insert(FeatureGeometry{ex("far"), kG1, Point{{8.0, 52.0010}}});    // ~111.3 m
    store.insert(FeatureGeometry{ex("near"), kG1, Point{{8.0, 52.0001}}});   // replaces
  }
  SpatialStore store(path);
  EXPECT_EQ(store.size(), 3u);
  auto hits = store.query_within_distance({8.0, 52.0}, 100);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].instance, ex("near"));
  EXPECT_EQ(hits[1].instance, ex("mid"));
  EXPECT_THROW(store.query_within_distance({8.0, 52.0}, -1), Error);
  EXPECT_THROW(store.insert(FeatureGeometry{ex("bad"), kG1, Polygon{{{0, 0}, {1, 1}}}}), Error);
}

TEST(SeriesStore, AppendRangeProjection) {
  SeriesStore store;
  auto s = ex("s");
  auto c1 = ex("c1"), c2 = ex("c2");
  std::vector<SeriesRow> rows;
  for (int i = 0; i < 10; ++i) {
    SeriesRow r{1000 + i * 10, LonLat{8, 52}, {{c1, double(i)}}};
    if (i % 2) r.values[c2] = -i;
    rows.push_back(r);
  }
  EXPECT_EQ(store.append(s, rows, kG1), 10u);
  auto got = store.range(s, 1020, 1050);
  ASSERT_EQ(got.size(), 4u);
  EXPECT_EQ(got.front(), rows[2]);
  auto proj = store.range(s, 0, 5000, std::vector<Iri>{c2});
  ASSERT_EQ(proj.size(), 10u);
  EXPECT_TRUE(proj[0].values.empty());
  EXPECT_EQ(proj[1].values.at(c2), -1);
  EXPECT_THROW(store.range(s, 10, 5), Error);
  EXPECT_THROW(store.range(ex("nope"), 0, 1), Error);
  std::vector<SeriesRow> stale{SeriesRow{1005, std::nullopt, {}}};
  EXPECT_THROW(store.append(s, stale, kG1), Error);
  std::vector<SeriesRow> later{SeriesRow{5000, std::nullopt, {}}};
  EXPECT_THROW(store.append(s, later, kG2), Error);
  EXPECT_EQ(store.length(s), 10u);
}

TEST(SeriesStore, PersistsExactly) {
  fixture::TempDir dir;
  auto s = ex("series%20one");
  std::vector<SeriesRow> rows{{1, LonLat{7.1234567, 52.7654321}, {{ex("c"), 0.1 + 0.2}}},
                              {2, std::nullopt, {{ex("c"), -1e-300}}}};
  {
    SeriesStore store(dir.path());
    store.append(s, rows, kG1);
  }
  SeriesStore store(dir.path());
  EXPECT_EQ(store.all(s), rows);
  EXPECT_EQ(store.graph_of(s), kG1);
}
