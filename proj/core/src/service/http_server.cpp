#include "atelier/service/http_server.hpp"

#include <httplib.h>

#include <charconv>

namespace atelier::service {

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kPng = "image/png";
constexpr const char* kSession = R"(/v1/sessions/([^/]+))";

std::span<const std::uint8_t> body_bytes(const httplib::Request& req) {
  return {reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size()};
}

Json body_json(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::BadRequest, "request body is not valid JSON");
  return j;
}

void send_json(httplib::Response& res, const Json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), kJson);
}

void send_png(httplib::Response& res, const Bytes& png) {
  res.status = 200;
  res.set_content(std::string(png.begin(), png.end()), kPng);
}

template <typename T>
std::optional<T> query_number(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string text = req.get_param_value(name);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::BadRequest, std::string("query parameter '") + name + "' is not a number");
  }
  return value;
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::NoCanvas: return 409;
    case ErrorCode::TooLarge: return 413;
    case ErrorCode::NoDetections:
    case ErrorCode::DegenerateResult:
    case ErrorCode::AllPixelsFiltered:
    case ErrorCode::EmptyRegion:
    case ErrorCode::EmptyMask:
    case ErrorCode::EmptyPalette:
    case ErrorCode::NoPoints:
    case ErrorCode::EmptyInput: return 422;
    case ErrorCode::ProviderUnavailable: return 503;
    case ErrorCode::Timeout: return 504;
    case ErrorCode::InvalidKernel:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::OutOfBounds:
    case ErrorCode::ModeMismatch:
    case ErrorCode::BadImage:
    case ErrorCode::DegeneratePolygon:
    case ErrorCode::BadRequest:
    case ErrorCode::InvalidConfig: return 400;
  }
  return 500;
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  httplib::Server& srv = impl_->server;
  Service& svc = impl_->service;
  const int threads = std::max(1, svc.config().worker_threads);
  srv.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
  srv.set_payload_max_length(512u * 1024u * 1024u);

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_json(res, {{"error", to_string(e.code())}, {"message", e.what()}}, http_status(e.code()));
    } catch (const Json::exception& e) {
      send_json(res, {{"error", "BadRequest"}, {"message", e.what()}}, 400);
    } catch (const std::exception& e) {
      send_json(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
    }
  });

  srv.Get("/v1/health", [&svc](const httplib::Request&, httplib::Response& res) {
    send_json(res, {{"status", "ok"},
                    {"provider", svc.provider().name()},
                    {"sessions", svc.session_count()}});
  });

  srv.Get(R"(/v1/grids/([a-z_]+))", [](const httplib::Request& req, httplib::Response& res) {
    const auto kind = parse_grid_kind(req.matches[1].str());
    if (!kind) throw Error(ErrorCode::NotFound, "unknown grid '" + req.matches[1].str() + "'");
    send_json(res, atelier::to_json(generate_grid(*kind)));
  });

  srv.Post("/v1/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.create_session(body_bytes(req)), 201);
  });

  const std::string session = kSession;
  srv.Get(session + "$", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.session_info(req.matches[1]));
  });
  srv.Delete(session + "$", [&svc](const httplib::Request& req, httplib::Response& res) {
    svc.delete_session(req.matches[1]);
    res.status = 204;
  });
  srv.Get(session + "/config", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.session_config(req.matches[1]));
  });
  srv.Put(session + "/config", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.update_config(req.matches[1], body_json(req)));
  });
  srv.Post(session + "/composition", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.composition_guidance(req.matches[1], body_json(req)));
  });
  srv.Post(session + "/value-feedback", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.value_feedback(req.matches[1], body_json(req)));
  });
  srv.Post(session + "/color-feedback", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.color_feedback(req.matches[1], body_json(req)));
  });
  srv.Get(session + "/value-guidance", [&svc](const httplib::Request& req, httplib::Response& res) {
    const Target target =
        parse_target(req.has_param("target") ? req.get_param_value("target") : "reference");
    BlurOverride blur;
    if (req.has_param("filter")) {
      blur.filter = parse_blur_filter(req.get_param_value("filter"));
      if (!blur.filter) throw Error(ErrorCode::BadRequest, "unknown blur filter");
    }
    blur.kernel_size = query_number<double>(req, "kernel_size");
    send_png(res, svc.value_guidance(req.matches[1], target, blur));
  });
  srv.Get(session + "/color-isolation", [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto x = query_number<int>(req, "x");
    const auto y = query_number<int>(req, "y");
    if (!x || !y) throw Error(ErrorCode::BadRequest, "color-isolation needs x and y");
    send_png(res, svc.color_isolation(req.matches[1], *x, *y));
  });
  srv.Put(session + "/canvas", [&svc](const httplib::Request& req, httplib::Response& res) {
    send_json(res, svc.update_canvas(req.matches[1], body_bytes(req)));
  });
  srv.Post(session + "/recolor", [&svc](const httplib::Request& req, httplib::Response& res) {
    const Json body = body_json(req);
    if (!body.contains("lasso") || !body.contains("hue") || !body.contains("saturation")) {
      throw Error(ErrorCode::BadRequest, "recolor needs lasso, hue and saturation");
    }
    const std::vector<NormPoint> lasso = points_from_json(body["lasso"]);
    send_png(res, svc.recolor(req.matches[1], lasso, body["hue"].get<double>(),
                              body["saturation"].get<double>()));
  });
  srv.Get(session + R"(/(reference|canvas)\.png)",
          [&svc](const httplib::Request& req, httplib::Response& res) {
            send_png(res, svc.image_png(req.matches[1], parse_target(req.matches[2].str())));
          });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace atelier::service
