#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "agrihub/api/accounts.hpp"
#include "agrihub/api/config.hpp"
#include "agrihub/linker/linker.hpp"
#include "agrihub/parsers/registry.hpp"
#include "agrihub/separation/separation.hpp"
#include "agrihub/stores/series_store.hpp"
#include "agrihub/stores/spatial_store.hpp"
#include "agrihub/stores/triple_store.hpp"
#include "agrihub/wikinormia/registry.hpp"

namespace agrihub::api {

struct IngestReceipt {
  Iri file;  // also the named graph
  Iri format;
  std::size_t triples = 0;
  std::size_t geometries = 0;
  std::size_t series_rows = 0;
  std::vector<std::string> warnings;
  std::vector<linker::DuplicatePair> links;  // auto-dedup only
};

enum class SpatialMode { intersects, within_distance };

struct SeparationRun {
  std::string run_id;
  separation::SeparationResult result;
};

/// The stores, registries and access rules behind both the HTTP service
/// and the CLI. All public operations are thread-safe. Each ingest,
/// grant change, link, annotation and separation run is applied under one
/// writer lock, so readers see a file's output entirely or not at all.
class Platform {
 public:
  explicit Platform(Config config);
  ~Platform();

  const Config& config() const noexcept { return config_; }
  bool is_admin(std::string_view token) const noexcept;

  IngestReceipt ingest_file(std::string_view token, std::string_view bytes, const std::string& filename,
                            const std::optional<Iri>& format_hint = std::nullopt,
                            const parsers::SiblingFiles& siblings = {});

  bool check_access(std::string_view token, Capability capability, const Iri& target) const;

  /// Empty `graphs` means every graph the token may read. Throws
  /// access-denied when no requested graph is readable.
  std::vector<BindingSet> query_graph(std::string_view token, const std::vector<TriplePattern>& patterns,
                                      const std::vector<Iri>& graphs = {}, bool expand_same_as = false) const;
  std::vector<FeatureGeometry> query_spatial(std::string_view token, const Shape& shape, SpatialMode mode,
                                             std::optional<double> meters = std::nullopt) const;
  std::vector<SeriesRow> query_timeseries(std::string_view token, const Iri& series, EpochMs from, EpochMs to,
                                          const std::optional<std::vector<Iri>>& columns = std::nullopt) const;

  std::string create_service(std::string_view admin_token, const std::string& service_id, std::vector<Grant> grants,
                             std::optional<std::string> token = std::nullopt);
  ServiceAccount manage_grants(std::string_view admin_token, const std::string& service_id,
                               std::vector<Grant> grants);

  // Wikinormia
  std::vector<wikinormia::FormatSummary> list_formats(std::optional<wikinormia::Status> status = std::nullopt) const;
  /// Latest final, or the draft when there is no final yet.
  wikinormia::FormatDefinition get_format(const Iri& format, std::optional<int> version = std::nullopt) const;
  Iri create_draft(std::string_view token, wikinormia::FormatDefinition def);
  int finalize(std::string_view token, const Iri& format);
  std::size_t add_comment(std::string_view token, const Iri& format, wikinormia::Comment comment);

  // Linking
  /// Links duplicates between two graphs, or across every pair of source
  /// graphs when both are empty. Admin only.
  std::vector<linker::DuplicatePair> dedup(std::string_view admin_token, const std::optional<Iri>& graph_a,
                                           const std::optional<Iri>& graph_b, std::optional<double> threshold);
  bool annotate(std::string_view admin_token, const Iri& instance, const Iri& predicate, const Term& value);
  std::set<Iri> equivalents(const Iri& iri) const;

  // Separation service
  /// Needs run-service and read-timeseries on the timelog's graph; stored
  /// boundaries count only where the token holds read-spatial.
  SeparationRun run_separation(std::string_view token, const Iri& timelog, const separation::Params& params);
  /// Stored GeoJSON export of a run; same access rule as reading the source.
  std::string separation_geojson(std::string_view token, const std::string& run_id) const;

  /// Source file graphs in ingestion order.
  std::vector<Iri> file_graphs() const;

  // Direct store access for tooling and tests; bypasses access control.
  const TripleStore& triples() const noexcept { return *triples_; }
  const SpatialStore& spatial() const noexcept { return *spatial_; }
  const SeriesStore& series() const noexcept { return *series_; }
  const wikinormia::Registry& registry() const noexcept { return *registry_; }
  const parsers::ParserRegistry& parsers() const noexcept { return *parsers_; }

 private:
  struct Run {
    Iri timelog;
    Iri graph;
    std::string geojson;
  };

  void authenticate(std::string_view token) const;
  void require_admin(std::string_view token) const;
  void require_vocab_writer(std::string_view token) const;
  bool allowed(std::string_view token, Capability c, const Iri& graph) const;
  void register_csv_parsers();
  std::vector<linker::DuplicatePair> dedup_locked(const Iri& a, const Iri& b, double threshold);
  std::vector<Iri> dedup_sources_locked() const;

  Config config_;
  std::unique_ptr<TripleStore> triples_;
  std::unique_ptr<SpatialStore> spatial_;
  std::unique_ptr<SeriesStore> series_;
  std::unique_ptr<wikinormia::Registry> registry_;
  std::unique_ptr<parsers::ParserRegistry> parsers_;
  std::unique_ptr<AccountStore> accounts_;

  // Writers hold it exclusively for a whole logical operation.
  mutable std::shared_mutex gate_;
  std::mutex numbering_;
  std::uint64_t next_file_ = 1;
  std::vector<Iri> files_;
  std::unique_ptr<JournalWriter> files_journal_;
  std::map<std::string, Run> runs_;
  std::uint64_t next_run_ = 1;
  std::unique_ptr<JournalWriter> runs_journal_;
};

}  // namespace agrihub::api
