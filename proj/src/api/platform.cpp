#include "agrihub/api/platform.hpp"

#include <algorithm>
#include <set>

#include "agrihub/core/error.hpp"
#include "agrihub/core/vocab.hpp"
#include "agrihub/parsers/csv.hpp"
#include "agrihub/stores/journal.hpp"
#include "agrihub/wikinormia/builtin.hpp"

namespace agrihub::api {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxExpansions = 4096;

Iri file_graph(std::uint64_t n) { return Iri(std::string(vocab::kFileGraphPrefix) + std::to_string(n)); }

Iri file_namespace(std::uint64_t n) {
  return Iri(std::string(vocab::kDefaultInstanceNs) + "file-" + std::to_string(n) + "/");
}

[[noreturn]] void deny(const std::string& what) { throw Error(Errc::access_denied, what); }

void check_output(const parsers::ParseOutput& out) {
  if (auto problem = parsers::closure_problem(out)) throw Error(Errc::validation, "parser output: " + *problem);
  for (const auto& g : out.geometries)
    if (auto problem = shape_problem(g.shape)) throw Error(Errc::validation, g.instance.str() + ": " + *problem);
  for (const auto& s : out.series)
    for (std::size_t i = 1; i < s.rows.size(); ++i)
      if (s.rows[i].timestamp <= s.rows[i - 1].timestamp)
        throw Error(Errc::validation, s.series.str() + ": timestamps not strictly ascending");
}

}  // namespace

Platform::Platform(Config config) : config_(std::move(config)) {
  const fs::path dir = config_.data_dir;
  fs::create_directories(dir / "ts");
  triples_ = std::make_unique<TripleStore>(dir / "graph.journal");
  spatial_ = std::make_unique<SpatialStore>(dir / "spatial.journal");
  series_ = std::make_unique<SeriesStore>(dir / "ts");

  registry_ = std::make_unique<wikinormia::Registry>();
  wikinormia::install_builtin_formats(*registry_);
  registry_->open_journal(dir / "wikinormia.journal");
  registry_->set_mirror([this](const TripleSet& added, const TripleSet& removed) {
    if (!removed.empty()) triples_->remove(vocab::wikinormia_graph, removed);
    if (!added.empty()) triples_->insert(vocab::wikinormia_graph, added);
  });

  parsers_ = std::make_unique<parsers::ParserRegistry>(*registry_);
  parsers::register_builtin_parsers(*parsers_, *registry_);
  register_csv_parsers();

  accounts_ = std::make_unique<AccountStore>(dir / "services.journal");

  replay_journal(dir / "files.journal", [this](std::string_view line, std::size_t) {
    auto j = nlohmann::json::parse(line);
    auto n = j.at("n").get<std::uint64_t>();
    files_.push_back(file_graph(n));
    next_file_ = std::max(next_file_, n + 1);
  });
  files_journal_ = std::make_unique<JournalWriter>(dir / "files.journal");

  replay_journal(dir / "runs.journal", [this](std::string_view line, std::size_t) {
    auto j = nlohmann::json::parse(line);
    auto n = j.at("n").get<std::uint64_t>();
    runs_.insert_or_assign(j.at("runId").get<std::string>(),
                           Run{Iri(j.at("timelog").get<std::string>()), Iri(j.at("graph").get<std::string>()),
                               j.at("geojson").get<std::string>()});
    next_run_ = std::max(next_run_, n + 1);
  });
  runs_journal_ = std::make_unique<JournalWriter>(dir / "runs.journal");
}

Platform::~Platform() = default;

bool Platform::is_admin(std::string_view token) const noexcept {
  return !token.empty() && token == config_.admin_token;
}

void Platform::authenticate(std::string_view token) const {
  if (token.empty()) throw Error(Errc::unauthenticated, "bearer token required");
  if (!is_admin(token) && !accounts_->by_token(token)) throw Error(Errc::unauthenticated, "unknown bearer token");
}

void Platform::require_admin(std::string_view token) const {
  authenticate(token);
  if (!is_admin(token)) deny("admin capability required");
}

void Platform::require_vocab_writer(std::string_view token) const {
  if (config_.vocab_requires_admin) require_admin(token);
}

bool Platform::allowed(std::string_view token, Capability c, const Iri& graph) const {
  return is_admin(token) || accounts_->check(token, c, graph.str());
}

bool Platform::check_access(std::string_view token, Capability capability, const Iri& target) const {
  return allowed(token, capability, target);
}

void Platform::register_csv_parsers() {
  for (const auto& f : registry_->list_formats(wikinormia::Status::final)) {
    if (parsers_->has_parser(f.format)) continue;
    try {
      parsers::csv_class(registry_->get_format(f.format));
    } catch (const Error&) {
      continue;  // not a CSV schema
    }
    parsers_->register_parser(parsers::csv_registration(*registry_, f.format));
  }
}

IngestReceipt Platform::ingest_file(std::string_view token, std::string_view bytes, const std::string& filename,
                                    const std::optional<Iri>& format_hint, const parsers::SiblingFiles& siblings) {
  require_admin(token);
  parsers::ParseInput input{filename, bytes, &siblings, {}};
  const Iri format = format_hint ? *format_hint : parsers_->detect_format(input);

  std::uint64_t n;
  {
    std::lock_guard lock(numbering_);
    n = next_file_++;
  }
  input.context = parsers::ParseContext{file_graph(n), file_namespace(n)};
  parsers::ParseOutput out = parsers_->parse(format, input);
  check_output(out);

  std::unique_lock gate(gate_);
  IngestReceipt receipt{input.context.graph, format, 0, 0, 0, std::move(out.warnings), {}};
  receipt.triples = triples_->insert(receipt.file, out.triples);
  spatial_->insert(out.geometries);
  receipt.geometries = out.geometries.size();
  for (const auto& s : out.series) {
    if (s.rows.empty()) continue;
    receipt.series_rows += series_->append(s.series, s.rows, receipt.file);
  }
  files_journal_->append(nlohmann::json{{"n", n}, {"format", format.str()}, {"name", filename}}.dump());
  files_.push_back(receipt.file);

  if (config_.auto_dedup) {
    for (const auto& other : dedup_sources_locked()) {
      if (other == receipt.file) continue;
      auto pairs = dedup_locked(other, receipt.file, config_.dedup_threshold);
      receipt.links.insert(receipt.links.end(), pairs.begin(), pairs.end());
    }
  }
  return receipt;
}

std::vector<BindingSet> Platform::query_graph(std::string_view token, const std::vector<TriplePattern>& patterns,
                                              const std::vector<Iri>& graphs, bool expand_same_as) const {
  if (patterns.empty()) throw Error(Errc::validation, "at least one pattern required");
  authenticate(token);
  std::shared_lock gate(gate_);
  if (!is_admin(token) && !accounts_->has_capability(token, Capability::read_graph))
    deny("token holds no read-graph grant");
  const std::vector<Iri> requested = graphs.empty() ? triples_->graphs() : graphs;
  std::vector<Iri> readable;
  for (const auto& g : requested)
    if (allowed(token, Capability::read_graph, g)) readable.push_back(g);
  if (readable.empty() && !graphs.empty()) deny("none of the requested graphs may be read");
  if (readable.empty()) return {};

  if (!expand_same_as) return triples_->bgp(patterns, readable);

  // Every constant IRI in subject/object position ranges over its class.
  std::vector<std::vector<TriplePattern>> variants{{}};
  for (const auto& p : patterns) {
    auto options = [&](const PatternTerm& t) {
      std::vector<PatternTerm> out;
      const auto* term = std::get_if<Term>(&t);
      const auto* iri = term ? std::get_if<Iri>(term) : nullptr;
      if (!iri) return std::vector<PatternTerm>{t};
      for (const auto& e : linker::resolve_equivalents(*triples_, *iri)) out.push_back(Term{e});
      return out;
    };
    std::vector<std::vector<TriplePattern>> next;
    for (const auto& s : options(p.subject))
      for (const auto& o : options(p.object))
        for (const auto& prefix : variants) {
          if (next.size() >= kMaxExpansions) throw Error(Errc::validation, "sameAs expansion too large");
          auto v = prefix;
          v.push_back({s, p.predicate, o});
          next.push_back(std::move(v));
        }
    variants = std::move(next);
  }
  std::set<BindingSet> merged;
  for (const auto& v : variants)
    for (auto& b : triples_->bgp(v, readable)) merged.insert(std::move(b));
  return {merged.begin(), merged.end()};
}

std::vector<FeatureGeometry> Platform::query_spatial(std::string_view token, const Shape& shape, SpatialMode mode,
                                                     std::optional<double> meters) const {
  if (auto problem = shape_problem(shape)) throw Error(Errc::validation, "query shape: " + *problem);
  authenticate(token);
  std::shared_lock gate(gate_);
  if (!is_admin(token) && !accounts_->has_capability(token, Capability::read_spatial))
    deny("token holds no read-spatial grant");
  std::vector<FeatureGeometry> hits;
  if (mode == SpatialMode::intersects) {
    hits = spatial_->query_intersects(shape);
  } else {
    if (!meters) throw Error(Errc::validation, "within-distance needs meters");
    const auto* point = std::get_if<Point>(&shape);
    if (!point) throw Error(Errc::validation, "within-distance needs a Point");
    hits = spatial_->query_within_distance(point->at, *meters);
  }
  std::erase_if(hits, [&](const FeatureGeometry& f) { return !allowed(token, Capability::read_spatial, f.graph); });
  return hits;
}

std::vector<SeriesRow> Platform::query_timeseries(std::string_view token, const Iri& series, EpochMs from, EpochMs to,
                                                  const std::optional<std::vector<Iri>>& columns) const {
  authenticate(token);
  std::shared_lock gate(gate_);
  if (!is_admin(token) && !accounts_->has_capability(token, Capability::read_timeseries))
    deny("token holds no read-timeseries grant");
  auto graph = series_->graph_of(series);
  if (!graph) throw Error(Errc::not_found, "no series " + series.str());
  if (!allowed(token, Capability::read_timeseries, *graph)) deny("series graph may not be read");
  return series_->range(series, from, to, columns);
}

std::string Platform::create_service(std::string_view admin_token, const std::string& service_id,
                                     std::vector<Grant> grants, std::optional<std::string> token) {
  require_admin(admin_token);
  if (token && *token == config_.admin_token) throw Error(Errc::conflict, "token already in use");
  std::unique_lock gate(gate_);
  return accounts_->create(service_id, std::move(grants), std::move(token));
}

ServiceAccount Platform::manage_grants(std::string_view admin_token, const std::string& service_id,
                                       std::vector<Grant> grants) {
  require_admin(admin_token);
  std::unique_lock gate(gate_);
  return accounts_->set_grants(service_id, std::move(grants));
}

std::vector<wikinormia::FormatSummary> Platform::list_formats(std::optional<wikinormia::Status> status) const {
  return registry_->list_formats(status);
}

wikinormia::FormatDefinition Platform::get_format(const Iri& format, std::optional<int> version) const {
  if (!version && !registry_->is_final(format)) {
    if (auto draft = registry_->get_draft(format)) return *draft;
  }
  return registry_->get_format(format, version);
}

Iri Platform::create_draft(std::string_view token, wikinormia::FormatDefinition def) {
  require_vocab_writer(token);
  std::unique_lock gate(gate_);
  return registry_->create_draft(std::move(def));
}

int Platform::finalize(std::string_view token, const Iri& format) {
  require_vocab_writer(token);
  std::unique_lock gate(gate_);
  int version = registry_->finalize(format);
  register_csv_parsers();
  return version;
}

std::size_t Platform::add_comment(std::string_view token, const Iri& format, wikinormia::Comment comment) {
  require_vocab_writer(token);
  std::unique_lock gate(gate_);
  return registry_->add_comment(format, std::move(comment));
}

std::vector<Iri> Platform::dedup_sources_locked() const {
  std::vector<Iri> out = files_;
  if (triples_->has_graph(vocab::osm_fallback_graph)) out.push_back(vocab::osm_fallback_graph);
  return out;
}

std::vector<linker::DuplicatePair> Platform::dedup_locked(const Iri& a, const Iri& b, double threshold) {
  auto pairs = linker::find_duplicates(*triples_, *spatial_, a, b, threshold);
  linker::link_same_as(*triples_, pairs);
  return pairs;
}

std::vector<linker::DuplicatePair> Platform::dedup(std::string_view admin_token, const std::optional<Iri>& graph_a,
                                                   const std::optional<Iri>& graph_b,
                                                   std::optional<double> threshold) {
  require_admin(admin_token);
  const double t = threshold.value_or(config_.dedup_threshold);
  if (!(t > 0 && t <= 1)) throw Error(Errc::validation, "threshold must lie in (0, 1]");
  if (graph_a.has_value() != graph_b.has_value()) throw Error(Errc::validation, "give both graphs or neither");
  std::unique_lock gate(gate_);
  if (graph_a) return dedup_locked(*graph_a, *graph_b, t);
  std::vector<linker::DuplicatePair> all;
  const auto sources = dedup_sources_locked();
  for (std::size_t i = 0; i < sources.size(); ++i)
    for (std::size_t j = i + 1; j < sources.size(); ++j) {
      auto pairs = dedup_locked(sources[i], sources[j], t);
      all.insert(all.end(), pairs.begin(), pairs.end());
    }
  return all;
}

bool Platform::annotate(std::string_view admin_token, const Iri& instance, const Iri& predicate, const Term& value) {
  require_admin(admin_token);
  std::unique_lock gate(gate_);
  return linker::annotate(*triples_, instance, predicate, value);
}

std::set<Iri> Platform::equivalents(const Iri& iri) const {
  std::shared_lock gate(gate_);
  return linker::resolve_equivalents(*triples_, iri);
}

SeparationRun Platform::run_separation(std::string_view token, const Iri& timelog, const separation::Params& params) {
  authenticate(token);
  const bool admin = is_admin(token);
  if (!admin && !accounts_->has_capability(token, Capability::run_service)) deny("token holds no run-service grant");
  std::unique_lock gate(gate_);
  auto graph = series_->graph_of(timelog);
  if (!graph) throw Error(Errc::not_found, "no series " + timelog.str());
  if (!allowed(token, Capability::run_service, *graph) || !allowed(token, Capability::read_timeseries, *graph))
    deny("run-service and read-timeseries are required on " + graph->str());

  separation::BoundarySources sources{
      *triples_, *spatial_, [&](const Iri& g) { return allowed(token, Capability::read_spatial, g); },
      config_.fallback_boundaries,
      [this](const TripleSet& triples, const std::vector<FeatureGeometry>& features) {
        triples_->insert(vocab::osm_fallback_graph, triples);
        spatial_->insert(features);
      }};
  auto result = separation::run_separation(timelog, {*triples_, *spatial_, *series_}, sources, params);

  const std::uint64_t n = next_run_++;
  std::string id = "run-" + std::to_string(n);
  std::string geojson = separation::export_segments_geojson(result).dump();
  runs_journal_->append(nlohmann::json{{"n", n}, {"runId", id}, {"timelog", timelog.str()}, {"graph", graph->str()},
                                       {"geojson", geojson}}
                            .dump());
  runs_.insert_or_assign(id, Run{timelog, *graph, std::move(geojson)});
  return {id, std::move(result)};
}

std::string Platform::separation_geojson(std::string_view token, const std::string& run_id) const {
  authenticate(token);
  std::shared_lock gate(gate_);
  auto it = runs_.find(run_id);
  if (it == runs_.end()) throw Error(Errc::not_found, "no separation run '" + run_id + "'");
  if (!allowed(token, Capability::read_timeseries, it->second.graph)) deny("run source may not be read");
  return it->second.geojson;
}

std::vector<Iri> Platform::file_graphs() const {
  std::shared_lock gate(gate_);
  return files_;
}

}  // namespace agrihub::api
