#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>

#include "agrihub/api/http_server.hpp"
#include "agrihub/api/json_codec.hpp"
#include "agrihub/core/error.hpp"
#include "agrihub/parsers/wkt.hpp"
#include "agrihub/stores/journal.hpp"

using namespace agrihub;
using nlohmann::json;

namespace {

api::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

api::Grant parse_grant(const std::string& entry) {
  auto eq = entry.rfind('=');
  if (eq == std::string::npos) throw Error(Errc::validation, "grant must be PREFIX=CAPABILITY");
  return api::grant_from_json({{"graphPattern", entry.substr(0, eq)}, {"capability", entry.substr(eq + 1)}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agrihub: agricultural semantic data platform"};
  app.require_subcommand(1);
  std::string config_path = "agrihub.json";
  std::string token;
  app.add_option("-c,--config", config_path, "Configuration file")->capture_default_str();
  app.add_option("-t,--token", token, "Bearer token (defaults to the configured admin token)");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "Parse a file into the stores");
  std::string ingest_file;
  std::vector<std::string> ingest_siblings;
  std::string ingest_format;
  ingest->add_option("file", ingest_file)->required()->check(CLI::ExistingFile);
  ingest->add_option("-s,--sibling", ingest_siblings, "Companion file (e.g. TLG header/binary)")
      ->check(CLI::ExistingFile);
  ingest->add_option("-f,--format", ingest_format, "Format IRI, skipping detection");

  auto* vocab = app.add_subcommand("vocab", "Wikinormia formats");
  vocab->require_subcommand(1);
  auto* vocab_list = vocab->add_subcommand("list", "List formats");
  std::string vocab_status;
  vocab_list->add_option("--status", vocab_status)->check(CLI::IsMember({"draft", "final"}));
  auto* vocab_show = vocab->add_subcommand("show", "Print a format definition");
  std::string vocab_iri;
  int vocab_version = 0;
  vocab_show->add_option("iri", vocab_iri)->required();
  vocab_show->add_option("--version", vocab_version);
  auto* vocab_import = vocab->add_subcommand("import", "Create a draft from a JSON definition");
  std::string vocab_file;
  vocab_import->add_option("file", vocab_file)->required()->check(CLI::ExistingFile);
  auto* vocab_finalize = vocab->add_subcommand("finalize", "Finalize the draft of a format");
  vocab_finalize->add_option("iri", vocab_iri)->required();

  auto* query = app.add_subcommand("query", "Run a read query");
  query->require_subcommand(1);
  auto* q_graph = query->add_subcommand("graph", "Basic graph pattern query");
  std::vector<std::string> q_patterns, q_graphs;
  bool q_expand = false;
  q_graph->add_option("pattern", q_patterns, "Patterns such as '?t <iri> ?d'")->required();
  q_graph->add_option("-g,--graph", q_graphs);
  q_graph->add_flag("--expand-same-as", q_expand);
  auto* q_spatial = query->add_subcommand("spatial", "Spatial query");
  std::string q_wkt, q_mode = "intersects";
  std::optional<double> q_meters;
  q_spatial->add_option("wkt", q_wkt, "Query geometry as WKT")->required();
  q_spatial->add_option("--mode", q_mode)->check(CLI::IsMember({"intersects", "within-distance"}));
  q_spatial->add_option("--meters", q_meters);
  auto* q_series = query->add_subcommand("series", "Time-series range");
  std::string q_series_iri;
  std::int64_t q_from = std::numeric_limits<std::int64_t>::min(), q_to = std::numeric_limits<std::int64_t>::max();
  std::vector<std::string> q_columns;
  q_series->add_option("iri", q_series_iri)->required();
  q_series->add_option("--from", q_from);
  q_series->add_option("--to", q_to);
  q_series->add_option("--column", q_columns);

  auto* grant = app.add_subcommand("grant", "Create a service or replace its grants");
  std::string grant_service;
  std::vector<std::string> grant_specs;
  bool grant_create = false;
  grant->add_option("service", grant_service)->required();
  grant->add_option("grants", grant_specs, "PREFIX=CAPABILITY entries");
  grant->add_flag("--create", grant_create, "Create the account and print its token");

  auto* separate = app.add_subcommand("separate", "Run the separation service on a timelog");
  std::string sep_iri;
  separation::Params sep_params;
  bool sep_geojson = false;
  separate->add_option("timelog", sep_iri)->required();
  separate->add_option("--gap-seconds", sep_params.gap_seconds)->capture_default_str();
  separate->add_option("--min-rows", sep_params.min_rows)->capture_default_str();
  separate->add_flag("--geojson", sep_geojson, "Print the GeoJSON export instead of the summary");

  auto* dedup = app.add_subcommand("dedup", "Link duplicate fields by spatial overlap");
  std::string dedup_a, dedup_b;
  std::optional<double> dedup_threshold;
  dedup->add_option("--graph-a", dedup_a);
  dedup->add_option("--graph-b", dedup_b);
  dedup->add_option("--threshold", dedup_threshold);

  CLI11_PARSE(app, argc, argv);

  try {
    api::Platform platform(api::Config::load(config_path));
    if (token.empty()) token = platform.config().admin_token;

    if (*serve) {
      api::HttpServer server(platform);
      int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ":" << bound << "\n";
      server.listen();
      g_server = nullptr;
    } else if (*ingest) {
      parsers::SiblingFiles siblings;
      for (const auto& s : ingest_siblings)
        siblings[std::filesystem::path(s).filename().string()] = read_file(s);
      std::optional<Iri> hint;
      if (!ingest_format.empty()) hint = Iri(ingest_format);
      const auto bytes = read_file(ingest_file);
      print(api::to_json(platform.ingest_file(token, bytes, std::filesystem::path(ingest_file).filename().string(),
                                              hint, siblings)));
    } else if (*vocab_list) {
      std::optional<wikinormia::Status> status;
      if (!vocab_status.empty()) status = wikinormia::status_from_string(vocab_status);
      json out = json::array();
      for (const auto& f : platform.list_formats(status)) out.push_back(api::to_json(f));
      print(out);
    } else if (*vocab_show) {
      std::optional<int> version;
      if (vocab_version > 0) version = vocab_version;
      print(wikinormia::to_json(platform.get_format(Iri(vocab_iri), version)));
    } else if (*vocab_import) {
      auto def = wikinormia::format_from_json(json::parse(read_file(vocab_file)));
      print({{"formatIri", platform.create_draft(token, std::move(def)).str()}, {"status", "draft"}});
    } else if (*vocab_finalize) {
      print({{"formatIri", vocab_iri}, {"version", platform.finalize(token, Iri(vocab_iri))}});
    } else if (*q_graph) {
      std::vector<Iri> graphs(q_graphs.begin(), q_graphs.end());
      auto bindings = platform.query_graph(token, api::patterns_from_json(q_patterns), graphs, q_expand);
      json out = json::array();
      for (const auto& b : bindings) out.push_back(api::to_json(b));
      print({{"bindings", out}});
    } else if (*q_spatial) {
      auto mode = q_mode == "intersects" ? api::SpatialMode::intersects : api::SpatialMode::within_distance;
      json out = json::array();
      for (const auto& f : platform.query_spatial(token, parsers::parse_wkt(q_wkt), mode, q_meters))
        out.push_back(api::to_json(f));
      print({{"features", out}});
    } else if (*q_series) {
      std::optional<std::vector<Iri>> columns;
      if (!q_columns.empty()) columns = std::vector<Iri>(q_columns.begin(), q_columns.end());
      json out = json::array();
      for (const auto& r : platform.query_timeseries(token, Iri(q_series_iri), q_from, q_to, columns))
        out.push_back(api::to_json(r));
      print({{"series", q_series_iri}, {"rows", out}});
    } else if (*grant) {
      std::vector<api::Grant> grants;
      for (const auto& s : grant_specs) grants.push_back(parse_grant(s));
      if (grant_create) {
        print({{"serviceId", grant_service},
               {"token", platform.create_service(token, grant_service, std::move(grants))}});
      } else {
        print(api::to_json(platform.manage_grants(token, grant_service, std::move(grants))));
      }
    } else if (*separate) {
      auto run = platform.run_separation(token, Iri(sep_iri), sep_params);
      if (sep_geojson) std::cout << platform.separation_geojson(token, run.run_id) << "\n";
      else print({{"runId", run.run_id}, {"result", api::to_json(run.result)}});
    } else if (*dedup) {
      std::optional<Iri> a, b;
      if (!dedup_a.empty()) a = Iri(dedup_a);
      if (!dedup_b.empty()) b = Iri(dedup_b);
      json out = json::array();
      for (const auto& p : platform.dedup(token, a, b, dedup_threshold)) out.push_back(api::to_json(p));
      print({{"pairs", out}});
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"detail", e.detail()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"detail", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
