#pragma once

#include <memory>
#include <string>

#include "agrihub/api/platform.hpp"
#include "agrihub/core/error.hpp"

namespace agrihub::api {

/// HTTP status for an error code (401, 403, 404, 409, 400, ...).
int http_status(Errc code) noexcept;

/// JSON-over-HTTP front end of a Platform. Errors are returned as
/// {"error": code, "detail": text}.
class HttpServer {
 public:
  explicit HttpServer(Platform& platform);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host:port` (port 0 picks a free one) and returns the port.
  int bind(const std::string& host, int port = 0);
  /// Serves on the bound socket until stop().
  void listen();
  /// bind + listen on a background thread; returns the port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace agrihub::api
