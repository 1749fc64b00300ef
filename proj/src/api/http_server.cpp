#include "agrihub/api/http_server.hpp"

#include <httplib.h>

#include <charconv>
#include <chrono>
#include <limits>
#include <thread>

#include "agrihub/api/json_codec.hpp"
#include "agrihub/core/error.hpp"
#include "agrihub/stores/geometry_json.hpp"

namespace agrihub::api {

using nlohmann::json;

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::unauthenticated: return 401;
    case Errc::access_denied: return 403;
    case Errc::not_found: return 404;
    case Errc::conflict:
    case Errc::ambiguous_format: return 409;
    case Errc::precondition: return 412;
    case Errc::unknown_format: return 415;
    case Errc::boundaries_unavailable: return 422;
    case Errc::corrupt_journal:
    case Errc::io_error: return 500;
    default: return 400;
  }
}

namespace {

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, Errc code, const std::string& detail) {
  send_json(res, {{"error", std::string(to_string(code))}, {"detail", detail}}, http_status(code));
}

Handler guarded(Handler fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.detail());
    } catch (const json::exception& e) {
      send_error(res, Errc::validation, std::string("bad request body: ") + e.what());
    } catch (const std::exception& e) {
      send_error(res, Errc::io_error, e.what());
    }
  };
}

std::string bearer(const httplib::Request& req) {
  auto h = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (h.size() > prefix.size() && std::string_view(h).substr(0, prefix.size()) == prefix) return h.substr(prefix.size());
  return {};
}

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(Errc::validation, std::string("request body is not JSON: ") + e.what());
  }
}

std::optional<std::int64_t> int_param(const httplib::Request& req, const std::string& name) {
  if (!req.has_param(name)) return std::nullopt;
  const auto text = req.get_param_value(name);
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw Error(Errc::validation, "query parameter '" + name + "' must be an integer");
  return v;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!part.empty()) out.push_back(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

struct HttpServer::Impl {
  Platform& platform;
  httplib::Server server;
  std::thread thread;

  explicit Impl(Platform& p) : platform(p) { routes(); }

  void routes() {
    auto& s = server;
    auto& p = platform;

    s.Get("/health", guarded([](const auto&, auto& res) { send_json(res, {{"status", "ok"}}); }));

    s.Post("/files", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      if (!req.is_multipart_form_data() || !req.has_file("file"))
        throw Error(Errc::validation, "multipart field 'file' required");
      auto file = req.get_file_value("file");
      parsers::SiblingFiles siblings;
      for (const auto& part : req.get_file_values("sibling")) {
        if (part.filename.empty()) throw Error(Errc::validation, "sibling parts need a filename");
        siblings[part.filename] = part.content;
      }
      std::optional<Iri> hint;
      if (req.has_file("formatIri")) hint = Iri(req.get_file_value("formatIri").content);
      else if (req.has_param("formatIri")) hint = Iri(req.get_param_value("formatIri"));
      auto name = file.filename.empty() ? std::string("upload") : file.filename;
      auto receipt = p.ingest_file(bearer(req), file.content, name, hint, siblings);
      send_json(res, to_json(receipt), 201);
    }));
    s.Get("/files", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      if (!p.is_admin(bearer(req))) throw Error(Errc::access_denied, "admin capability required");
      json out = json::array();
      for (const auto& g : p.file_graphs()) out.push_back(g.str());
      send_json(res, {{"files", out}});
    }));

    s.Get("/formats", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      std::optional<wikinormia::Status> status;
      if (req.has_param("status")) {
        status = wikinormia::status_from_string(req.get_param_value("status"));
        if (!status) throw Error(Errc::validation, "status must be draft or final");
      }
      json out = json::array();
      for (const auto& f : p.list_formats(status)) out.push_back(to_json(f));
      send_json(res, {{"formats", out}});
    }));
    s.Post("/formats", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto def = wikinormia::format_from_json(body_json(req));
      auto iri = p.create_draft(bearer(req), std::move(def));
      send_json(res, {{"formatIri", iri.str()}, {"status", "draft"}}, 201);
    }));
    s.Post(R"(/formats/(.+)/finalize)", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      Iri iri(req.matches[1].str());
      int version = p.finalize(bearer(req), iri);
      send_json(res, {{"formatIri", iri.str()}, {"version", version}, {"status", "final"}});
    }));
    s.Post(R"(/formats/(.+)/comments)", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      Iri iri(req.matches[1].str());
      auto body = body_json(req);
      if (body.is_object() && !body.contains("timestamp")) {
        auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
        body["timestamp"] = format_datetime(now);
      }
      auto count = p.add_comment(bearer(req), iri, wikinormia::comment_from_json(body));
      send_json(res, {{"formatIri", iri.str()}, {"comments", count}}, 201);
    }));
    s.Get(R"(/formats/(.+))", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      Iri iri(req.matches[1].str());
      std::optional<int> version;
      if (auto v = int_param(req, "version")) version = static_cast<int>(*v);
      send_json(res, wikinormia::to_json(p.get_format(iri, version)));
    }));

    s.Post("/query/graph", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req);
      auto patterns = patterns_from_json(body.value("patterns", json()));
      std::vector<Iri> graphs;
      if (body.contains("graphs")) {
        if (!body["graphs"].is_array()) throw Error(Errc::validation, "graphs must be an array");
        for (const auto& g : body["graphs"]) graphs.emplace_back(g.get<std::string>());
      }
      auto bindings = p.query_graph(bearer(req), patterns, graphs, body.value("expandSameAs", false));
      json out = json::array();
      for (const auto& b : bindings) out.push_back(to_json(b));
      send_json(res, {{"bindings", out}});
    }));
    s.Post("/query/spatial", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req);
      if (!body.contains("geometry")) throw Error(Errc::validation, "geometry required");
      Shape shape;
      try {
        shape = shape_from_geojson(body["geometry"]);
      } catch (const Error& e) {
        throw Error(Errc::validation, "geometry: " + e.detail());
      }
      auto mode_name = body.value("mode", std::string("intersects"));
      SpatialMode mode;
      if (mode_name == "intersects") mode = SpatialMode::intersects;
      else if (mode_name == "within-distance") mode = SpatialMode::within_distance;
      else throw Error(Errc::validation, "mode must be intersects or within-distance");
      std::optional<double> meters;
      if (body.contains("meters")) {
        if (!body["meters"].is_number()) throw Error(Errc::validation, "meters must be a number");
        meters = body["meters"].get<double>();
      }
      auto features = p.query_spatial(bearer(req), shape, mode, meters);
      json out = json::array();
      for (const auto& f : features) out.push_back(to_json(f));
      send_json(res, {{"features", out}});
    }));
    s.Get(R"(/series/(.+)/range)", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      Iri series(req.matches[1].str());
      auto from = int_param(req, "from").value_or(std::numeric_limits<std::int64_t>::min());
      auto to = int_param(req, "to").value_or(std::numeric_limits<std::int64_t>::max());
      std::optional<std::vector<Iri>> columns;
      if (req.has_param("columns")) {
        columns.emplace();
        for (const auto& c : split_commas(req.get_param_value("columns"))) columns->emplace_back(c);
      }
      auto rows = p.query_timeseries(bearer(req), series, from, to, columns);
      json out = json::array();
      for (const auto& r : rows) out.push_back(to_json(r));
      send_json(res, {{"series", series.str()}, {"rows", out}});
    }));

    s.Post("/services/separation/run", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req);
      separation::Params params;
      params.gap_seconds = body.value("gapSeconds", params.gap_seconds);
      params.min_rows = body.value("minRows", params.min_rows);
      auto run = p.run_separation(bearer(req), iri_from_json(body, "timelogIri"), params);
      send_json(res, {{"runId", run.run_id}, {"result", to_json(run.result)}}, 201);
    }));
    s.Post("/services", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req);
      if (!body.contains("serviceId") || !body["serviceId"].is_string())
        throw Error(Errc::validation, "serviceId required");
      auto id = body["serviceId"].get<std::string>();
      auto grants = grants_from_json(body.value("grants", json::array()));
      std::optional<std::string> token;
      if (body.contains("token")) token = body["token"].get<std::string>();
      auto secret = p.create_service(bearer(req), id, std::move(grants), token);
      send_json(res, {{"serviceId", id}, {"token", secret}}, 201);
    }));
    s.Put(R"(/services/([^/]+)/grants)", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req);
      const json& list = body.is_array() ? body : body.value("grants", json());
      auto account = p.manage_grants(bearer(req), req.matches[1].str(), grants_from_json(list));
      send_json(res, to_json(account));
    }));
    s.Get(R"(/separation/([^/]+)/geojson)", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      res.status = 200;
      res.set_content(p.separation_geojson(bearer(req), req.matches[1].str()), "application/geo+json");
    }));

    s.Post("/links/dedup", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req);
      std::optional<Iri> a, b;
      if (body.contains("graphA")) a = iri_from_json(body, "graphA");
      if (body.contains("graphB")) b = iri_from_json(body, "graphB");
      std::optional<double> threshold;
      if (body.contains("threshold")) threshold = body["threshold"].get<double>();
      auto pairs = p.dedup(bearer(req), a, b, threshold);
      json out = json::array();
      for (const auto& pair : pairs) out.push_back(to_json(pair));
      send_json(res, {{"pairs", out}});
    }));
    s.Post("/annotations", guarded([&p](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req);
      if (!body.contains("value")) throw Error(Errc::validation, "value required");
      bool added = p.annotate(bearer(req), iri_from_json(body, "instance"), iri_from_json(body, "predicate"),
                              term_from_json(body["value"]));
      send_json(res, {{"added", added}}, added ? 201 : 200);
    }));
  }
};

HttpServer::HttpServer(Platform& platform) : impl_(std::make_unique<Impl>(platform)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = bind(host, port);
  impl_->thread = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace agrihub::api
