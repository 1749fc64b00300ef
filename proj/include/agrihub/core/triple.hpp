#pragma once

#include <set>
#include <variant>

#include "agrihub/core/iri.hpp"
#include "agrihub/core/literal.hpp"

namespace agrihub {

/// Object position of a triple: an IRI or a typed literal. IRIs order
/// before literals.
using Term = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

using TripleSet = std::set<Triple>;

/// A set of triples tagged with a graph IRI (one per source file or
/// system graph).
struct NamedGraph {
  Iri graph;
  TripleSet triples;
};

inline const Iri* as_iri(const Term& t) noexcept { return std::get_if<Iri>(&t); }
inline const Literal* as_literal(const Term& t) noexcept { return std::get_if<Literal>(&t); }

}  // namespace agrihub
