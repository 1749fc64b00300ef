#include "agrihub/stores/series_store.hpp"

#include <algorithm>
#include <mutex>

#include <nlohmann/json.hpp>

#include "agrihub/core/error.hpp"
#include "agrihub/core/hash.hpp"
#include "agrihub/stores/journal.hpp"

namespace agrihub {

SeriesStore::SeriesStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(*dir_))
    if (entry.path().extension() == ".journal") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) restore_file(f);
}

std::string SeriesStore::journal_name(const Iri& series) { return sha256_hex(series.str()).substr(0, 32) + ".journal"; }

void SeriesStore::check_rows(const Series* existing, std::span<const SeriesRow> rows) {
  std::optional<EpochMs> last;
  if (existing && !existing->timestamps.empty()) last = existing->timestamps.back();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (last && rows[i].timestamp <= *last)
      throw Error(Errc::validation, "row " + std::to_string(i) + ": timestamp " + std::to_string(rows[i].timestamp) +
                                        " is not after " + std::to_string(*last));
    last = rows[i].timestamp;
  }
}

void SeriesStore::append_rows(Series& s, std::span<const SeriesRow> rows) {
  for (const auto& row : rows) {
    auto index = static_cast<std::uint32_t>(s.timestamps.size());
    s.timestamps.push_back(row.timestamp);
    s.positions.push_back(row.position);
    for (const auto& [column, value] : row.values) {
      auto& col = s.columns[column];
      col.rows.push_back(index);
      col.values.push_back(value);
    }
  }
}

std::string SeriesStore::row_json(const SeriesRow& row) {
  nlohmann::json j;
  j["t"] = row.timestamp;
  if (row.position) j["pos"] = {row.position->lon, row.position->lat};
  auto values = nlohmann::json::object();
  for (const auto& [k, v] : row.values) values[k.str()] = v;
  j["v"] = std::move(values);
  return j.dump();
}

std::string SeriesStore::header_json(const Iri& series, const Iri& graph) {
  return nlohmann::json{{"series", series.str()}, {"graph", graph.str()}}.dump();
}

std::size_t SeriesStore::append(const Iri& series, std::span<const SeriesRow> rows, const Iri& graph) {
  std::unique_lock lock(mutex_);
  auto it = series_.find(series);
  if (it != series_.end() && it->second.graph != graph)
    throw Error(Errc::conflict, "series " + series.str() + " belongs to graph " + it->second.graph.str());
  check_rows(it == series_.end() ? nullptr : &it->second, rows);
  if (dir_) {
    std::vector<std::string> lines;
    if (it == series_.end()) lines.push_back(header_json(series, graph));
    for (const auto& r : rows) lines.push_back(row_json(r));
    JournalWriter(*dir_ / journal_name(series)).append(lines);
  }
  if (it == series_.end()) it = series_.emplace(series, Series{graph, {}, {}, {}}).first;
  append_rows(it->second, rows);
  return rows.size();
}

void SeriesStore::replace(const Iri& series, std::span<const SeriesRow> rows, const Iri& graph) {
  std::unique_lock lock(mutex_);
  check_rows(nullptr, rows);
  if (dir_) {
    std::string contents = header_json(series, graph) + "\n";
    for (const auto& r : rows) contents += row_json(r) + "\n";
    write_file_atomically(*dir_ / journal_name(series), contents);
  }
  Series fresh{graph, {}, {}, {}};
  append_rows(fresh, rows);
  series_.insert_or_assign(series, std::move(fresh));
}

bool SeriesStore::drop(const Iri& series) {
  std::unique_lock lock(mutex_);
  if (dir_) std::filesystem::remove(*dir_ / journal_name(series));
  return series_.erase(series) > 0;
}

std::vector<SeriesRow> SeriesStore::range(const Iri& series, EpochMs from, EpochMs to,
                                          const std::optional<std::vector<Iri>>& columns) const {
  if (from > to) throw Error(Errc::validation, "range start is after range end");
  std::shared_lock lock(mutex_);
  auto it = series_.find(series);
  if (it == series_.end()) throw Error(Errc::not_found, "unknown series " + series.str());
  const Series& s = it->second;
  auto lo = static_cast<std::uint32_t>(std::lower_bound(s.timestamps.begin(), s.timestamps.end(), from) -
                                       s.timestamps.begin());
  auto hi = static_cast<std::uint32_t>(std::upper_bound(s.timestamps.begin(), s.timestamps.end(), to) -
                                       s.timestamps.begin());
  std::vector<SeriesRow> out;
  if (lo >= hi) return out;
  out.reserve(hi - lo);
  for (auto i = lo; i < hi; ++i) out.push_back(SeriesRow{s.timestamps[i], s.positions[i], {}});

  auto fill = [&](const Iri& name, const Column& col) {
    auto first = std::lower_bound(col.rows.begin(), col.rows.end(), lo);
    for (auto r = first; r != col.rows.end() && *r < hi; ++r)
      out[*r - lo].values.emplace(name, col.values[static_cast<std::size_t>(r - col.rows.begin())]);
  };
  if (columns) {
    for (const auto& name : *columns)
      if (auto c = s.columns.find(name); c != s.columns.end()) fill(name, c->second);
  } else {
    for (const auto& [name, col] : s.columns) fill(name, col);
  }
  return out;
}

std::vector<SeriesRow> SeriesStore::all(const Iri& series) const {
  return range(series, std::numeric_limits<EpochMs>::min(), std::numeric_limits<EpochMs>::max());
}

bool SeriesStore::contains(const Iri& series) const {
  std::shared_lock lock(mutex_);
  return series_.contains(series);
}

std::optional<Iri> SeriesStore::graph_of(const Iri& series) const {
  std::shared_lock lock(mutex_);
  auto it = series_.find(series);
  if (it == series_.end()) return std::nullopt;
  return it->second.graph;
}

std::size_t SeriesStore::length(const Iri& series) const {
  std::shared_lock lock(mutex_);
  auto it = series_.find(series);
  return it == series_.end() ? 0 : it->second.timestamps.size();
}

std::vector<Iri> SeriesStore::series() const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> out;
  for (const auto& [k, v] : series_) out.push_back(k);
  return out;
}

void SeriesStore::restore_file(const std::filesystem::path& path) {
  Series* current = nullptr;
  replay_journal(path, [&](std::string_view line, std::size_t line_no) {
    auto j = nlohmann::json::parse(line);
    if (line_no == 1) {
      Iri series(j.at("series").get<std::string>());
      Iri graph(j.at("graph").get<std::string>());
      current = &series_.insert_or_assign(series, Series{graph, {}, {}, {}}).first->second;
      return;
    }
    SeriesRow row;
    row.timestamp = j.at("t").get<EpochMs>();
    if (j.contains("pos")) row.position = LonLat{j["pos"].at(0).get<double>(), j["pos"].at(1).get<double>()};
    for (const auto& [k, v] : j.at("v").items()) row.values.emplace(Iri(k), v.get<double>());
    check_rows(current, std::span<const SeriesRow>(&row, 1));
    append_rows(*current, std::span<const SeriesRow>(&row, 1));
  });
}

}  // namespace agrihub
