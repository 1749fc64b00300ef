#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "agrihub/core/triple.hpp"
#include "agrihub/stores/journal.hpp"

namespace agrihub {

struct Variable {
  std::string name;  // without the leading '?'
  friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Variable, Term>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

/// Variable name -> bound value.
using BindingSet = std::map<std::string, Term>;

/// Parses `?name`, `<iri>` or a literal from the front of `cursor`.
PatternTerm read_pattern_term(std::string_view& cursor);
/// Parses "s p o" (optional trailing " ."), e.g. `?t <https://...> "x"`.
TriplePattern parse_pattern(std::string_view text);
std::string format_pattern_term(const PatternTerm& term);

/// Named-graph triple store. Terms are dictionary-encoded; every graph
/// keeps SPO, POS and OSP permutation indexes. Many readers, one writer.
class TripleStore {
 public:
  TripleStore();
  /// Restores from and then journals to `journal_path`.
  explicit TripleStore(std::filesystem::path journal_path);
  ~TripleStore();
  TripleStore(const TripleStore&) = delete;
  TripleStore& operator=(const TripleStore&) = delete;

  /// Unions `triples` into `graph`; returns how many were new.
  std::size_t insert(const Iri& graph, const TripleSet& triples);
  std::size_t insert(const Iri& graph, std::span<const Triple> triples);
  /// Removes the listed triples; returns how many existed.
  std::size_t remove(const Iri& graph, const TripleSet& triples);

  /// Conjunctive basic graph pattern over the union of `graphs`. Results
  /// are distinct and sorted. Unknown graphs contribute nothing. Throws
  /// validation for an empty pattern list.
  std::vector<BindingSet> bgp(std::span<const TriplePattern> patterns, std::span<const Iri> graphs) const;

  /// Triples matching the given constants in one graph.
  std::vector<Triple> match(const Iri& graph, const std::optional<Iri>& s, const std::optional<Iri>& p,
                            const std::optional<Term>& o) const;

  std::vector<Iri> graphs() const;
  bool has_graph(const Iri& graph) const;
  NamedGraph snapshot(const Iri& graph) const;
  std::size_t size(const Iri& graph) const;
  /// Graphs in which `subject` has at least one triple with `predicate`.
  std::vector<Iri> graphs_with(const Iri& subject, const Iri& predicate) const;

 private:
  using Id = std::uint32_t;
  using Key = std::array<Id, 3>;
  struct GraphIndex {
    std::set<Key> spo, pos, osp;
  };

  std::optional<Id> lookup(const Term& term) const;
  Id intern(const Term& term);
  std::size_t insert_locked(const Iri& graph, std::span<const Triple> triples, std::vector<std::string>* journal);
  void scan(const GraphIndex& g, std::optional<Id> s, std::optional<Id> p, std::optional<Id> o,
            const std::function<void(const Key&)>& visit) const;
  void restore(const std::filesystem::path& path);

  mutable std::shared_mutex mutex_;
  std::vector<Term> terms_;
  std::unordered_map<std::string, Id> ids_;
  std::map<Iri, GraphIndex> graphs_;
  std::unique_ptr<JournalWriter> journal_;
};

}  // namespace agrihub
