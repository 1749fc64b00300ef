#include "agrihub/stores/triple_store.hpp"

#include <algorithm>
#include <mutex>

#include "agrihub/core/error.hpp"
#include "agrihub/core/ntriples.hpp"

namespace agrihub {

PatternTerm read_pattern_term(std::string_view& cursor) {
  while (!cursor.empty() && (cursor.front() == ' ' || cursor.front() == '\t')) cursor.remove_prefix(1);
  if (!cursor.empty() && cursor.front() == '?') {
    std::size_t n = 1;
    while (n < cursor.size() && cursor[n] != ' ' && cursor[n] != '\t') ++n;
    std::string name(cursor.substr(1, n - 1));
    if (name.empty()) throw Error(Errc::parse_error, "empty variable name");
    cursor.remove_prefix(n);
    return Variable{std::move(name)};
  }
  return read_term(cursor);
}

TriplePattern parse_pattern(std::string_view text) {
  std::string_view cursor = text;
  auto s = read_pattern_term(cursor);
  auto p = read_pattern_term(cursor);
  auto o = read_pattern_term(cursor);
  while (!cursor.empty() && cursor.front() == ' ') cursor.remove_prefix(1);
  if (!cursor.empty() && cursor != ".") throw Error(Errc::parse_error, "trailing text in pattern: " + std::string(cursor));
  auto bad_position = [](const PatternTerm& t) {
    const auto* term = std::get_if<Term>(&t);
    return term && !as_iri(*term);
  };
  if (bad_position(s) || bad_position(p))
    throw Error(Errc::parse_error, "subject and predicate must be variables or IRIs");
  return {std::move(s), std::move(p), std::move(o)};
}

std::string format_pattern_term(const PatternTerm& term) {
  if (const auto* v = std::get_if<Variable>(&term)) return "?" + v->name;
  return format_term(std::get<Term>(term));
}

TripleStore::TripleStore() = default;

TripleStore::TripleStore(std::filesystem::path journal_path) {
  restore(journal_path);
  journal_ = std::make_unique<JournalWriter>(std::move(journal_path));
}

TripleStore::~TripleStore() = default;

std::optional<TripleStore::Id> TripleStore::lookup(const Term& term) const {
  auto it = ids_.find(format_term(term));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TripleStore::Id TripleStore::intern(const Term& term) {
  auto [it, inserted] = ids_.try_emplace(format_term(term), static_cast<Id>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::size_t TripleStore::insert(const Iri& graph, const TripleSet& triples) {
  std::vector<Triple> flat(triples.begin(), triples.end());
  return insert(graph, std::span<const Triple>(flat));
}

std::size_t TripleStore::insert(const Iri& graph, std::span<const Triple> triples) {
  std::unique_lock lock(mutex_);
  std::vector<std::string> lines;
  auto n = insert_locked(graph, triples, journal_ ? &lines : nullptr);
  if (journal_) journal_->append(lines);
  return n;
}

std::size_t TripleStore::insert_locked(const Iri& graph, std::span<const Triple> triples,
                                       std::vector<std::string>* journal) {
  auto& g = graphs_[graph];
  std::size_t added = 0;
  for (const auto& t : triples) {
    Id s = intern(t.subject), p = intern(t.predicate), o = intern(t.object);
    if (g.spo.insert({s, p, o}).second) {
      g.pos.insert({p, o, s});
      g.osp.insert({o, s, p});
      ++added;
      if (journal) journal->push_back("+ " + format_term(graph) + " " + format_triple(t));
    }
  }
  return added;
}

std::size_t TripleStore::remove(const Iri& graph, const TripleSet& triples) {
  std::unique_lock lock(mutex_);
  auto git = graphs_.find(graph);
  if (git == graphs_.end()) return 0;
  auto& g = git->second;
  std::vector<std::string> lines;
  std::size_t removed = 0;
  for (const auto& t : triples) {
    auto s = lookup(t.subject), p = lookup(t.predicate), o = lookup(t.object);
    if (!s || !p || !o) continue;
    if (g.spo.erase({*s, *p, *o})) {
      g.pos.erase({*p, *o, *s});
      g.osp.erase({*o, *s, *p});
      ++removed;
      lines.push_back("- " + format_term(graph) + " " + format_triple(t));
    }
  }
  if (journal_) journal_->append(lines);
  return removed;
}

void TripleStore::scan(const GraphIndex& g, std::optional<Id> s, std::optional<Id> p, std::optional<Id> o,
                       const std::function<void(const Key&)>& visit) const {
  // Each permutation is walked over the longest bound prefix; the key is
  // handed back in SPO order.
  auto walk = [&](const std::set<Key>& index, std::optional<Id> a, std::optional<Id> b, std::optional<Id> c,
                  auto to_spo) {
    Key lo{a.value_or(0), a && b ? *b : 0, a && b && c ? *c : 0};
    for (auto it = index.lower_bound(lo); it != index.end(); ++it) {
      const Key& k = *it;
      if (a && k[0] != *a) break;
      if (a && b && k[1] != *b) break;
      if (b && k[1] != *b) continue;
      if (c && k[2] != *c) continue;
      visit(to_spo(k));
    }
  };
  if (s) {
    walk(g.spo, s, p, o, [](const Key& k) { return k; });
  } else if (p) {
    walk(g.pos, p, o, std::nullopt, [](const Key& k) { return Key{k[2], k[0], k[1]}; });
  } else if (o) {
    walk(g.osp, o, std::nullopt, std::nullopt, [](const Key& k) { return Key{k[1], k[2], k[0]}; });
  } else {
    for (const auto& k : g.spo) visit(k);
  }
}

std::vector<Triple> TripleStore::match(const Iri& graph, const std::optional<Iri>& s, const std::optional<Iri>& p,
                                       const std::optional<Term>& o) const {
  std::shared_lock lock(mutex_);
  std::vector<Triple> out;
  auto git = graphs_.find(graph);
  if (git == graphs_.end()) return out;
  std::optional<Id> sid, pid, oid;
  if (s && !(sid = lookup(*s))) return out;
  if (p && !(pid = lookup(*p))) return out;
  if (o && !(oid = lookup(*o))) return out;
  scan(git->second, sid, pid, oid, [&](const Key& k) {
    out.push_back(Triple{std::get<Iri>(terms_[k[0]]), std::get<Iri>(terms_[k[1]]), terms_[k[2]]});
  });
  return out;
}

std::vector<BindingSet> TripleStore::bgp(std::span<const TriplePattern> patterns,
                                         std::span<const Iri> graphs) const {
  if (patterns.empty()) throw Error(Errc::validation, "basic graph pattern needs at least one triple pattern");
  std::shared_lock lock(mutex_);

  std::vector<const GraphIndex*> indexes;
  std::set<Iri> seen;
  for (const auto& g : graphs) {
    if (!seen.insert(g).second) continue;
    if (auto it = graphs_.find(g); it != graphs_.end()) indexes.push_back(&it->second);
  }

  // Variables get dense slots; constants are resolved to ids up front. A
  // constant absent from the dictionary cannot match anything.
  struct Slot {
    bool is_var = false;
    std::size_t var = 0;
    Id id = 0;
  };
  std::vector<std::string> var_names;
  auto var_slot = [&](const std::string& name) {
    auto it = std::find(var_names.begin(), var_names.end(), name);
    if (it != var_names.end()) return static_cast<std::size_t>(it - var_names.begin());
    var_names.push_back(name);
    return var_names.size() - 1;
  };
  std::vector<std::array<Slot, 3>> compiled;
  for (const auto& pat : patterns) {
    std::array<Slot, 3> slots;
    const PatternTerm* parts[3] = {&pat.subject, &pat.predicate, &pat.object};
    for (int i = 0; i < 3; ++i) {
      if (const auto* v = std::get_if<Variable>(parts[i])) {
        slots[i] = {true, var_slot(v->name), 0};
      } else {
        auto id = lookup(std::get<Term>(*parts[i]));
        if (!id) return {};
        slots[i] = {false, 0, *id};
      }
    }
    compiled.push_back(slots);
  }
  if (indexes.empty()) return {};

  constexpr Id kUnbound = static_cast<Id>(-1);
  std::vector<Id> binding(var_names.size(), kUnbound);
  std::vector<bool> done(compiled.size(), false);
  std::set<std::vector<Id>> solutions;

  auto resolved = [&](const Slot& s) -> std::optional<Id> {
    if (!s.is_var) return s.id;
    if (binding[s.var] != kUnbound) return binding[s.var];
    return std::nullopt;
  };

  std::function<void(std::size_t)> solve = [&](std::size_t depth) {
    if (depth == compiled.size()) {
      solutions.insert(binding);
      return;
    }
    // Most selective remaining pattern: the one with the most bound slots.
    std::size_t pick = compiled.size();
    int best = -1;
    for (std::size_t i = 0; i < compiled.size(); ++i) {
      if (done[i]) continue;
      int bound = 0;
      for (const auto& s : compiled[i]) bound += resolved(s).has_value();
      if (bound > best) {
        best = bound;
        pick = i;
      }
    }
    done[pick] = true;
    const auto& slots = compiled[pick];
    auto s = resolved(slots[0]), p = resolved(slots[1]), o = resolved(slots[2]);
    std::set<Key> matches;
    for (const auto* g : indexes) scan(*g, s, p, o, [&](const Key& k) { matches.insert(k); });
    for (const auto& k : matches) {
      std::vector<std::size_t> newly;
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        if (!slots[i].is_var) continue;
        Id& cell = binding[slots[i].var];
        if (cell == kUnbound) {
          cell = k[i];
          newly.push_back(slots[i].var);
        } else if (cell != k[i]) {
          ok = false;
        }
      }
      if (ok) solve(depth + 1);
      for (auto v : newly) binding[v] = kUnbound;
    }
    done[pick] = false;
  };
  solve(0);

  std::vector<BindingSet> out;
  out.reserve(solutions.size());
  for (const auto& sol : solutions) {
    BindingSet b;
    for (std::size_t v = 0; v < var_names.size(); ++v) b.emplace(var_names[v], terms_[sol[v]]);
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Iri> TripleStore::graphs() const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> out;
  for (const auto& [g, idx] : graphs_)
    if (!idx.spo.empty()) out.push_back(g);
  return out;
}

bool TripleStore::has_graph(const Iri& graph) const {
  std::shared_lock lock(mutex_);
  auto it = graphs_.find(graph);
  return it != graphs_.end() && !it->second.spo.empty();
}

NamedGraph TripleStore::snapshot(const Iri& graph) const {
  std::shared_lock lock(mutex_);
  NamedGraph out{graph, {}};
  if (auto it = graphs_.find(graph); it != graphs_.end()) {
    for (const auto& k : it->second.spo)
      out.triples.insert(Triple{std::get<Iri>(terms_[k[0]]), std::get<Iri>(terms_[k[1]]), terms_[k[2]]});
  }
  return out;
}

std::size_t TripleStore::size(const Iri& graph) const {
  std::shared_lock lock(mutex_);
  auto it = graphs_.find(graph);
  return it == graphs_.end() ? 0 : it->second.spo.size();
}

std::vector<Iri> TripleStore::graphs_with(const Iri& subject, const Iri& predicate) const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> out;
  auto s = lookup(subject), p = lookup(predicate);
  if (!s || !p) return out;
  for (const auto& [g, idx] : graphs_) {
    auto it = idx.spo.lower_bound({*s, *p, 0});
    if (it != idx.spo.end() && (*it)[0] == *s && (*it)[1] == *p) out.push_back(g);
  }
  return out;
}

void TripleStore::restore(const std::filesystem::path& path) {
  replay_journal(path, [&](std::string_view line, std::size_t) {
    if (line.size() < 2 || (line[0] != '+' && line[0] != '-') || line[1] != ' ')
      throw Error(Errc::parse_error, "expected '+ ' or '- ' prefix");
    bool add = line[0] == '+';
    std::string_view rest = line.substr(2);
    auto graph_term = read_term(rest);
    const auto* graph = as_iri(graph_term);
    if (!graph || rest.empty() || rest.front() != ' ') throw Error(Errc::parse_error, "expected graph IRI");
    rest.remove_prefix(1);
    Triple t = parse_triple_line(rest);
    if (add) {
      insert_locked(*graph, std::span<const Triple>(&t, 1), nullptr);
    } else if (auto it = graphs_.find(*graph); it != graphs_.end()) {
      auto s = lookup(t.subject), p = lookup(t.predicate), o = lookup(t.object);
      if (s && p && o && it->second.spo.erase({*s, *p, *o})) {
        it->second.pos.erase({*p, *o, *s});
        it->second.osp.erase({*o, *s, *p});
      }
    }
  });
}

}  // namespace agrihub
