#pragma once

#include <set>
#include <span>
#include <vector>

#include "agrihub/core/triple.hpp"
#include "agrihub/stores/spatial_store.hpp"
#include "agrihub/stores/triple_store.hpp"

namespace agrihub::linker {

inline constexpr double kDefaultThreshold = 0.7;

struct DuplicatePair {
  Iri a;  // from graph A
  Iri b;  // from graph B
  double iou = 0;
  friend bool operator==(const DuplicatePair&, const DuplicatePair&) = default;
};

/// Field-typed polygon instances of `graph_a` and `graph_b` whose grid IoU
/// reaches `threshold`, matched one-to-one greedily by descending IoU
/// (ties: a, then b). Throws validation unless 0 < threshold <= 1.
std::vector<DuplicatePair> find_duplicates(const TripleStore& triples, const SpatialStore& spatial,
                                           const Iri& graph_a, const Iri& graph_b, double threshold,
                                           int resolution = 256);

/// Inserts (a sameAs b) and (b sameAs a) into the links graph; returns the
/// number of new triples.
std::size_t link_same_as(TripleStore& triples, std::span<const DuplicatePair> pairs);

/// The sameAs equivalence class of `iri`, always containing `iri`.
std::set<Iri> resolve_equivalents(const TripleStore& triples, const Iri& iri);

/// Adds (instance predicate value) to the annotations graph. Throws
/// not-found when no graph types `instance`. Returns false if the
/// annotation already existed.
bool annotate(TripleStore& triples, const Iri& instance, const Iri& predicate, const Term& value);

}  // namespace agrihub::linker
