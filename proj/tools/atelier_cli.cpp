// atelier: composition, value and color guidance from the command line.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <sstream>

#include "atelier/error.hpp"
#include "atelier/json_io.hpp"
#include "atelier/png_io.hpp"
#include "atelier/service/http_server.hpp"
#include "atelier/service/service.hpp"
#include "atelier/svg.hpp"

namespace {

using namespace atelier;
using atelier::service::AnalysisConfig;
using atelier::service::Service;
using atelier::service::ServiceConfig;

// Flags shared by every subcommand. Names mirror the config file keys.
struct CommonFlags {
  std::optional<std::string> config_file;
  std::optional<std::string> provider;
  std::optional<std::string> mask_dir;
  std::optional<std::string> sidecar_url;
  std::optional<double> epsilon;
  std::optional<std::size_t> k_lines;
  std::optional<double> theta_dis;
  std::optional<double> theta_inl;
  std::optional<int> iterations;
  std::optional<int> max_lines;
  std::optional<std::uint64_t> seed;
  std::optional<int> palette_k;
  std::optional<std::uint64_t> palette_seed;
  std::optional<double> region_threshold;
  std::optional<double> tol_value;
  std::optional<double> tol_hue;
  std::optional<double> tol_saturation;
  std::optional<std::string> filter;
  std::optional<double> kernel_size;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_file, "JSON config file (env ATELIER_* overrides it)");
  app->add_option("--provider", f.provider, "segmentation provider: box | files | sidecar");
  app->add_option("--mask-dir", f.mask_dir, "directory of <label>.png masks (provider=files)");
  app->add_option("--sidecar-url", f.sidecar_url, "segmentation sidecar base URL");
  app->add_option("--epsilon", f.epsilon, "RDP tolerance in normalized units");
  app->add_option("--k-lines", f.k_lines, "number of composition lines to keep");
  app->add_option("--theta-dis", f.theta_dis, "RANSAC inlier distance");
  app->add_option("--theta-inl", f.theta_inl, "RANSAC minimum inlier fraction");
  app->add_option("--iterations", f.iterations, "RANSAC candidates per round");
  app->add_option("--max-lines", f.max_lines, "RANSAC line cap");
  app->add_option("--seed", f.seed, "RANSAC seed");
  app->add_option("--palette-k", f.palette_k, "dominant clusters per image");
  app->add_option("--palette-seed", f.palette_seed, "k-means seed");
  app->add_option("--region-threshold", f.region_threshold, "cluster region threshold");
  app->add_option("--tolerance-value", f.tol_value, "value match band (L* units)");
  app->add_option("--tolerance-hue", f.tol_hue, "hue match band (degrees)");
  app->add_option("--tolerance-saturation", f.tol_saturation, "saturation match band (points)");
  app->add_option("--filter", f.filter, "blur filter: gaussian | bilateral | median");
  app->add_option("--kernel-size", f.kernel_size, "blur kernel size in [1.5, 4.9]");
}

ServiceConfig build_config(const CommonFlags& f) {
  std::optional<std::filesystem::path> file;
  if (f.config_file) file = *f.config_file;
  ServiceConfig cfg = service::load_service_config(file);
  if (f.provider) cfg.provider.kind = *f.provider;
  if (f.mask_dir) cfg.provider.mask_dir = *f.mask_dir;
  if (f.sidecar_url) cfg.provider.sidecar_url = *f.sidecar_url;
  AnalysisConfig& a = cfg.defaults;
  if (f.epsilon) a.epsilon = *f.epsilon;
  if (f.k_lines) a.k_lines = *f.k_lines;
  if (f.theta_dis) a.ransac.theta_dis = *f.theta_dis;
  if (f.theta_inl) a.ransac.theta_inl = *f.theta_inl;
  if (f.iterations) a.ransac.iterations = *f.iterations;
  if (f.max_lines) a.ransac.max_lines = *f.max_lines;
  if (f.seed) a.ransac.seed = *f.seed;
  if (f.palette_k) a.palette_k = *f.palette_k;
  if (f.palette_seed) a.palette_seed = *f.palette_seed;
  if (f.region_threshold) a.region_threshold = *f.region_threshold;
  if (f.tol_value) a.tolerances.value = *f.tol_value;
  if (f.tol_hue) a.tolerances.hue = *f.tol_hue;
  if (f.tol_saturation) a.tolerances.saturation = *f.tol_saturation;
  if (f.filter) {
    const auto parsed = parse_blur_filter(*f.filter);
    if (!parsed) throw Error(ErrorCode::InvalidConfig, "unknown blur filter '" + *f.filter + "'");
    a.blur.filter = *parsed;
  }
  if (f.kernel_size) a.blur.kernel_size = *f.kernel_size;
  a.validate();
  return cfg;
}

BoundingBox parse_box(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  Json arr = Json::array();
  while (std::getline(ss, part, ',')) {
    try {
      arr.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadRequest, "box '" + text + "' is not x0,y0,x1,y1");
    }
  }
  return box_from_json(arr);
}

void emit_json(const Json& j, const std::optional<std::string>& path) {
  if (path) {
    write_file(*path, j.dump(2) + "\n");
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

// Opens a one-session service on the reference image.
std::string open_session(Service& svc, const std::string& reference) {
  return svc.create_session(read_file(reference))["id"].get<std::string>();
}

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"atelier: composition, value and color guidance for drawing practice"};
  app.require_subcommand(1);

  CommonFlags flags;

  // compose
  auto* compose = app.add_subcommand("compose", "composition lines and polygons for a reference");
  add_common(compose, flags);
  std::string reference;
  std::optional<std::string> prompt, json_out, svg_out, grid_name;
  std::vector<std::string> boxes;
  compose->add_option("reference", reference, "reference PNG")->required()->check(CLI::ExistingFile);
  compose->add_option("--prompt", prompt, "comma-separated objects of interest");
  compose->add_option("--box", boxes, "normalized box x0,y0,x1,y1 (repeatable)");
  compose->add_option("--json", json_out, "write JSON here instead of stdout");
  compose->add_option("--svg", svg_out, "write an SVG overlay");
  compose->add_option("--grid", grid_name, "grid drawn into the SVG")
      ->check(CLI::IsMember({"rule_of_thirds", "central_cross", "central_circle"}));

  // value
  auto* value = app.add_subcommand("value", "value feedback and blurred value guidance");
  add_common(value, flags);
  std::optional<std::string> canvas, guidance_out, target_name;
  value->add_option("reference", reference, "reference PNG")->required()->check(CLI::ExistingFile);
  value->add_option("--canvas", canvas, "canvas PNG; enables feedback")->check(CLI::ExistingFile);
  value->add_option("--guidance", guidance_out, "write the blurred value image here");
  value->add_option("--target", target_name, "image for --guidance: reference | canvas")
      ->check(CLI::IsMember({"reference", "canvas"}));
  value->add_option("--json", json_out, "write feedback JSON here instead of stdout");

  // color
  auto* color = app.add_subcommand("color", "hue and saturation feedback");
  add_common(color, flags);
  color->add_option("reference", reference, "reference PNG")->required()->check(CLI::ExistingFile);
  color->add_option("--canvas", canvas, "canvas PNG")->required()->check(CLI::ExistingFile);
  color->add_option("--json", json_out, "write feedback JSON here instead of stdout");

  // isolate
  auto* isolate = app.add_subcommand("isolate", "color isolation preview at a reference pixel");
  add_common(isolate, flags);
  int px = 0, py = 0;
  std::string isolate_out;
  isolate->add_option("reference", reference, "reference PNG")->required()->check(CLI::ExistingFile);
  isolate->add_option("--x", px, "pixel column")->required();
  isolate->add_option("--y", py, "pixel row")->required();
  isolate->add_option("-o,--out", isolate_out, "output PNG")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "run the /v1 HTTP API");
  add_common(serve, flags);
  std::optional<std::string> host, store_dir;
  std::optional<int> port, threads;
  serve->add_option("--host", host, "listen address");
  serve->add_option("--port", port, "listen port (0 picks one)");
  serve->add_option("--store-dir", store_dir, "persist sessions under this directory");
  serve->add_option("--worker-threads", threads, "HTTP worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    ServiceConfig cfg = build_config(flags);

    if (*compose) {
      Service svc(cfg);
      const std::string id = open_session(svc, reference);
      Json req = Json::object();
      if (prompt) req["prompt"] = *prompt;
      if (!boxes.empty()) {
        req["boxes"] = Json::array();
        for (const auto& b : boxes) req["boxes"].push_back(to_json(parse_box(b)));
      }
      const Json result = svc.composition_guidance(id, req);
      emit_json(result, json_out);
      if (svg_out) {
        std::vector<PolygonContour> polygons;
        for (const Json& p : result["polygons"]) polygons.push_back(polygon_from_json(p));
        std::vector<CompositionLine> lines;
        for (const Json& l : result["lines"]) lines.push_back(line_from_json(l));
        std::optional<GridOverlay> grid;
        if (grid_name) grid = generate_grid(*parse_grid_kind(*grid_name));
        const Json info = svc.session_info(id);
        write_file(*svg_out, render_overlay_svg(info["width"], info["height"], polygons, lines, grid));
      }
      return 0;
    }

    if (*value) {
      Service svc(cfg);
      const std::string id = open_session(svc, reference);
      if (canvas) svc.update_canvas(id, read_file(*canvas));
      if (guidance_out) {
        const auto target = service::parse_target(target_name.value_or("reference"));
        write_file(*guidance_out, svc.value_guidance(id, target));
      }
      if (canvas) {
        emit_json(svc.value_feedback(id), json_out);
      } else if (!guidance_out) {
        std::cerr << "atelier value: nothing to do; pass --canvas and/or --guidance\n";
        return 1;
      }
      return 0;
    }

    if (*color) {
      Service svc(cfg);
      const std::string id = open_session(svc, reference);
      svc.update_canvas(id, read_file(*canvas));
      emit_json(svc.color_feedback(id), json_out);
      return 0;
    }

    if (*isolate) {
      Service svc(cfg);
      const std::string id = open_session(svc, reference);
      write_file(isolate_out, svc.color_isolation(id, px, py));
      return 0;
    }

    if (*serve) {
      if (host) cfg.host = *host;
      if (port) cfg.port = *port;
      if (store_dir) cfg.store_dir = *store_dir;
      if (threads) cfg.worker_threads = *threads;
      Service svc(cfg);
      service::HttpServer server(svc);
      const int bound = server.bind(cfg.host, cfg.port);
      if (bound < 0) {
        std::cerr << "atelier serve: cannot bind " << cfg.host << ":" << cfg.port << "\n";
        return 1;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "atelier serve: listening on http://" << cfg.host << ":" << bound
                << " (provider " << svc.provider().name() << ", " << svc.session_count()
                << " stored sessions)\n";
      server.run();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "atelier: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "atelier: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
