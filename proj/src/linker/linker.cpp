#include "agrihub/linker/linker.hpp"

#include <algorithm>
#include <deque>

#include "agrihub/core/error.hpp"
#include "agrihub/core/vocab.hpp"

namespace agrihub::linker {

namespace {

struct Candidate {
  Iri instance;
  const Polygon* polygon;
  BBox bbox;
};

std::vector<Candidate> field_polygons(const TripleStore& triples, const std::vector<FeatureGeometry>& features,
                                      const Iri& graph) {
  std::vector<Candidate> out;
  for (const auto& f : features) {
    const auto* poly = std::get_if<Polygon>(&f.shape);
    if (!poly) continue;
    if (triples.match(graph, f.instance, vocab::type, Term{vocab::Field}).empty()) continue;
    out.push_back({f.instance, poly, f.bbox()});
  }
  return out;
}

}  // namespace

std::vector<DuplicatePair> find_duplicates(const TripleStore& triples, const SpatialStore& spatial,
                                           const Iri& graph_a, const Iri& graph_b, double threshold,
                                           int resolution) {
  if (!(threshold > 0 && threshold <= 1)) throw Error(Errc::validation, "threshold must lie in (0, 1]");
  const auto features_a = spatial.in_graph(graph_a);
  const auto features_b = spatial.in_graph(graph_b);
  const auto as = field_polygons(triples, features_a, graph_a);
  const auto bs = field_polygons(triples, features_b, graph_b);

  std::vector<DuplicatePair> scored;
  for (const auto& a : as) {
    for (const auto& b : bs) {
      if (a.instance == b.instance || !a.bbox.intersects(b.bbox)) continue;
      auto r = grid_iou(*a.polygon, *b.polygon, resolution);
      if (!r.degenerate && r.iou >= threshold) scored.push_back({a.instance, b.instance, r.iou});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const DuplicatePair& x, const DuplicatePair& y) {
    if (x.iou != y.iou) return x.iou > y.iou;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  std::set<Iri> used_a, used_b;
  std::vector<DuplicatePair> out;
  for (auto& p : scored) {
    if (used_a.contains(p.a) || used_b.contains(p.b)) continue;
    used_a.insert(p.a);
    used_b.insert(p.b);
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t link_same_as(TripleStore& triples, std::span<const DuplicatePair> pairs) {
  TripleSet links;
  for (const auto& p : pairs) {
    if (p.a == p.b) continue;
    links.insert({p.a, vocab::same_as, p.b});
    links.insert({p.b, vocab::same_as, p.a});
  }
  return links.empty() ? 0 : triples.insert(vocab::links_graph, links);
}

std::set<Iri> resolve_equivalents(const TripleStore& triples, const Iri& iri) {
  std::set<Iri> seen{iri};
  std::deque<Iri> queue{iri};
  while (!queue.empty()) {
    Iri current = queue.front();
    queue.pop_front();
    auto visit = [&](const Term& t) {
      if (const auto* next = std::get_if<Iri>(&t); next && seen.insert(*next).second) queue.push_back(*next);
    };
    for (const auto& t : triples.match(vocab::links_graph, current, vocab::same_as, std::nullopt)) visit(t.object);
    for (const auto& t : triples.match(vocab::links_graph, std::nullopt, vocab::same_as, Term{current}))
      visit(t.subject);
  }
  return seen;
}

bool annotate(TripleStore& triples, const Iri& instance, const Iri& predicate, const Term& value) {
  if (triples.graphs_with(instance, vocab::type).empty())
    throw Error(Errc::not_found, "no typed instance " + instance.str());
  TripleSet one{Triple{instance, predicate, value}};
  return triples.insert(vocab::annotations_graph, one) == 1;
}

}  // namespace agrihub::linker
