#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "agrihub/core/iri.hpp"
#include "agrihub/core/time.hpp"
#include "agrihub/stores/geometry.hpp"

namespace agrihub {

struct SeriesRow {
  EpochMs timestamp = 0;
  std::optional<LonLat> position;
  std::map<Iri, double> values;  // sparse: absent columns have no entry

  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

/// Append-only series with sparse columns. A series belongs to the graph
/// given on its first append; later appends must name the same graph.
class SeriesStore {
 public:
  SeriesStore() = default;
  /// Restores every `<dir>/*.journal` and journals to that directory.
  explicit SeriesStore(std::filesystem::path dir);

  /// Rows must be strictly ascending and later than the series' current
  /// maximum; otherwise nothing is written and validation is thrown.
  std::size_t append(const Iri& series, std::span<const SeriesRow> rows, const Iri& graph);
  /// Drops any existing data for `series` and stores `rows` instead.
  void replace(const Iri& series, std::span<const SeriesRow> rows, const Iri& graph);
  bool drop(const Iri& series);

  /// Rows with from <= t <= to, ascending. With `columns`, values are
  /// projected to those columns; rows keep timestamp and position.
  /// Throws not-found for an unknown series, validation for from > to.
  std::vector<SeriesRow> range(const Iri& series, EpochMs from, EpochMs to,
                               const std::optional<std::vector<Iri>>& columns = std::nullopt) const;
  std::vector<SeriesRow> all(const Iri& series) const;

  bool contains(const Iri& series) const;
  std::optional<Iri> graph_of(const Iri& series) const;
  std::size_t length(const Iri& series) const;
  std::vector<Iri> series() const;

  /// File name used for a series journal.
  static std::string journal_name(const Iri& series);

 private:
  struct Column {
    std::vector<std::uint32_t> rows;
    std::vector<double> values;
  };
  struct Series {
    Iri graph;
    std::vector<EpochMs> timestamps;
    std::vector<std::optional<LonLat>> positions;
    std::map<Iri, Column> columns;
  };

  static void check_rows(const Series* existing, std::span<const SeriesRow> rows);
  static void append_rows(Series& s, std::span<const SeriesRow> rows);
  static std::string row_json(const SeriesRow& row);
  static std::string header_json(const Iri& series, const Iri& graph);
  void restore_file(const std::filesystem::path& path);

  mutable std::shared_mutex mutex_;
  std::map<Iri, Series> series_;
  std::optional<std::filesystem::path> dir_;
};

}  // namespace agrihub
