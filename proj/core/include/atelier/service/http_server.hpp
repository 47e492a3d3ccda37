#pragma once

#include <memory>
#include <string>

#include "atelier/error.hpp"
#include "atelier/service/service.hpp"

namespace atelier::service {

/// HTTP status for a domain error.
int http_status(ErrorCode code) noexcept;

/// /v1 JSON+PNG API over a Service.
///
///   GET    /v1/health
///   GET    /v1/grids/{kind}
///   POST   /v1/sessions                        PNG body -> 201 {id, ...}
///   GET    /v1/sessions/{id}
///   DELETE /v1/sessions/{id}
///   GET    /v1/sessions/{id}/config
///   PUT    /v1/sessions/{id}/config            partial config JSON
///   POST   /v1/sessions/{id}/composition       {prompt?, boxes?, epsilon?, k?, config?}
///   POST   /v1/sessions/{id}/value-feedback    {config?}
///   POST   /v1/sessions/{id}/color-feedback    {config?}
///   GET    /v1/sessions/{id}/value-guidance    ?target=&filter=&kernel_size=  -> PNG
///   GET    /v1/sessions/{id}/color-isolation   ?x=&y=  -> PNG
///   PUT    /v1/sessions/{id}/canvas            PNG body
///   POST   /v1/sessions/{id}/recolor           {lasso, hue, saturation} -> PNG
///   GET    /v1/sessions/{id}/reference.png | canvas.png
///
/// Errors are {error, message} with the status from http_status().
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool run();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace atelier::service
