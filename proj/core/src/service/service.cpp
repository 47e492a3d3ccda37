#include "atelier/service/service.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "atelier/error.hpp"
#include "atelier/filters.hpp"
#include "atelier/pipeline.hpp"

namespace atelier::service {

namespace {

namespace fs = std::filesystem;

bool valid_id(const std::string& id) {
  if (id.size() != 32) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

PaletteOptions palette_options(const AnalysisConfig& cfg) {
  PaletteOptions o;
  o.k = cfg.palette_k;
  o.seed = cfg.palette_seed;
  o.region_threshold = cfg.region_threshold;
  return o;
}

SegmentationPrompt prompt_from_json(const Json& req) {
  SegmentationPrompt p;
  if (req.contains("prompt") && !req["prompt"].is_null()) {
    if (!req["prompt"].is_string()) throw Error(ErrorCode::BadRequest, "prompt must be a string");
    p.text = req["prompt"].get<std::string>();
  }
  if (req.contains("boxes")) {
    if (!req["boxes"].is_array()) throw Error(ErrorCode::BadRequest, "boxes must be an array");
    for (const Json& b : req["boxes"]) p.boxes.push_back(box_from_json(b));
  }
  return p;
}

AnalysisConfig request_config(const Json& req, const AnalysisConfig& session_cfg) {
  if (!req.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
  AnalysisConfig cfg = session_cfg;
  if (req.contains("config")) cfg = analysis_from_json(req["config"], cfg);
  try {
    if (req.contains("epsilon")) cfg.epsilon = req["epsilon"].get<double>();
    if (req.contains("k")) cfg.k_lines = req["k"].get<std::size_t>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::BadRequest, "epsilon must be a number and k a non-negative integer");
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::BadRequest, e.what());
  }
  return cfg;
}

const ImageBuffer& target_image(const Session& s, Target t) {
  if (t == Target::Reference) return s.reference;
  if (!s.canvas) throw Error(ErrorCode::NoCanvas, "session has no canvas snapshot yet");
  return *s.canvas;
}

}  // namespace

std::string_view to_string(Target t) noexcept {
  return t == Target::Reference ? "reference" : "canvas";
}

Target parse_target(std::string_view name) {
  if (name == "reference") return Target::Reference;
  if (name == "canvas") return Target::Canvas;
  throw Error(ErrorCode::BadRequest, "target must be 'reference' or 'canvas'");
}

Service::Service(ServiceConfig cfg, std::shared_ptr<SegmentationProvider> provider)
    : cfg_(std::move(cfg)), provider_(std::move(provider)) {
  cfg_.defaults.validate();
  if (!provider_) provider_ = make_provider(cfg_.provider);
  if (cfg_.store_dir) load_persisted();
}

std::string Service::new_id() {
  std::lock_guard lock(id_mutex_);
  static constexpr char kHex[] = "0123456789abcdef";
  std::random_device rd;
  std::string id;
  for (int word = 0; word < 4; ++word) {
    std::uint32_t v = rd();
    for (int nibble = 0; nibble < 8; ++nibble, v >>= 4) id.push_back(kHex[v & 0xF]);
  }
  return id;
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
  std::shared_lock lock(store_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session '" + id + "'");
  return it->second;
}

Json Service::create_session(std::span<const std::uint8_t> png) {
  ImageBuffer reference = decode_png(png, cfg_.max_pixels);
  std::shared_ptr<Session> session;
  {
    std::unique_lock lock(store_mutex_);
    std::string id;
    do {
      id = new_id();
    } while (sessions_.count(id));
    session = std::make_shared<Session>(id, std::move(reference), cfg_.defaults);
    sessions_.emplace(id, session);
  }
  persist_new(*session);
  return {{"id", session->id},
          {"width", session->reference.width()},
          {"height", session->reference.height()},
          {"config", to_json(session->config)}};
}

Json Service::session_info(const std::string& id) const {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  return {{"id", s->id},
          {"width", s->reference.width()},
          {"height", s->reference.height()},
          {"has_canvas", s->canvas.has_value()},
          {"canvas_version", s->canvas_version},
          {"config", to_json(s->config)}};
}

void Service::delete_session(const std::string& id) {
  {
    std::unique_lock lock(store_mutex_);
    if (sessions_.erase(id) == 0) throw Error(ErrorCode::NotFound, "no session '" + id + "'");
  }
  if (cfg_.store_dir && valid_id(id)) {
    std::error_code ec;
    fs::remove_all(*cfg_.store_dir / id, ec);
  }
}

std::size_t Service::session_count() const {
  std::shared_lock lock(store_mutex_);
  return sessions_.size();
}

Json Service::session_config(const std::string& id) const {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  return to_json(s->config);
}

Json Service::update_config(const std::string& id, const Json& patch) {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  AnalysisConfig next = analysis_from_json(patch, s->config);
  next.validate();
  s->config = next;
  persist_config(*s);
  return to_json(s->config);
}

Palette Service::reference_palette(const Session& s, ClusterMode mode,
                                   const AnalysisConfig& cfg) const {
  const PaletteOptions opts = palette_options(cfg);
  const std::string key = Json{{"mode", std::string(atelier::to_string(mode))},
                               {"k", opts.k},
                               {"seed", opts.seed},
                               {"region_threshold", opts.region_threshold}}
                              .dump();
  {
    std::lock_guard lock(s.cache_mutex);
    auto it = s.palette_cache.find(key);
    if (it != s.palette_cache.end()) return it->second;
  }
  Palette p = extract_dominant(s.reference, mode, opts, PaletteSource::Reference);
  std::lock_guard lock(s.cache_mutex);
  return s.palette_cache.emplace(key, std::move(p)).first->second;
}

SegmentationResult Service::cached_segmentation(const Session& s,
                                                const SegmentationPrompt& prompt) const {
  Json boxes = Json::array();
  for (const BoundingBox& b : prompt.boxes) boxes.push_back(atelier::to_json(b));
  const std::string key = Json{{"provider", provider_->name()},
                               {"text", prompt.text.value_or("")},
                               {"boxes", std::move(boxes)}}
                              .dump();
  {
    std::lock_guard lock(s.cache_mutex);
    auto it = s.segmentation_cache.find(key);
    if (it != s.segmentation_cache.end()) return it->second;
  }
  SegmentationResult r = segment(s.reference, prompt, *provider_);
  std::lock_guard lock(s.cache_mutex);
  return s.segmentation_cache.emplace(key, std::move(r)).first->second;
}

Json Service::composition_guidance(const std::string& id, const Json& request) const {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  const AnalysisConfig cfg = request_config(request, s->config);
  const SegmentationPrompt prompt = prompt_from_json(request);
  const SegmentationResult seg = cached_segmentation(*s, prompt);

  CompositionOptions opts;
  opts.epsilon = cfg.epsilon;
  opts.ransac = cfg.ransac;
  opts.k_lines = cfg.k_lines;
  const CompositionResult result = compose_from_masks(seg.masks, opts);

  Json polygons = Json::array();
  for (const PolygonContour& p : result.polygons) polygons.push_back(atelier::to_json(p));
  Json grids = Json::array();
  for (GridKind kind : {GridKind::RuleOfThirds, GridKind::CentralCross, GridKind::CentralCircle}) {
    grids.push_back(atelier::to_json(generate_grid(kind)));
  }
  return {{"session", s->id},
          {"config", to_json(cfg)},
          {"seed", cfg.ransac.seed},
          {"epsilon_used", result.epsilon_used},
          {"provider", seg.provider},
          {"box_fallback", seg.box_fallback},
          {"sampled_points", result.sampled_points},
          {"polygons", std::move(polygons)},
          {"lines", lines_to_json(result.lines)},
          {"grids", std::move(grids)}};
}

Json Service::feedback(const std::string& id, ClusterMode mode, const Json& request) const {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  const AnalysisConfig cfg = request_config(request.is_null() ? Json::object() : request, s->config);
  const ImageBuffer& canvas = target_image(*s, Target::Canvas);

  const Palette reference = reference_palette(*s, mode, cfg);
  const Palette painted = extract_dominant(canvas, mode, palette_options(cfg), PaletteSource::Canvas);
  const std::vector<MatchPair> pairs = compare_palettes(painted, reference, cfg.tolerances);

  Json out_pairs = Json::array();
  for (const MatchPair& p : pairs) out_pairs.push_back(atelier::to_json(p, true));
  return {{"session", s->id},
          {"config", to_json(cfg)},
          {"mode", std::string(atelier::to_string(mode))},
          {"canvas_version", s->canvas_version},
          {"reference_palette", atelier::to_json(reference)},
          {"canvas_palette", atelier::to_json(painted)},
          {"pairs", std::move(out_pairs)}};
}

Bytes Service::value_guidance(const std::string& id, Target target,
                              const BlurOverride& blur) const {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  BlurSpec spec = s->config.blur;
  if (blur.filter) spec.filter = *blur.filter;
  if (blur.kernel_size) spec.kernel_size = *blur.kernel_size;
  spec.validate();
  return encode_png(apply_blur(to_value_image(target_image(*s, target)), spec));
}

Bytes Service::color_isolation(const std::string& id, int x, int y) const {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  if (!s->reference.contains(x, y)) {
    throw Error(ErrorCode::OutOfBounds, "pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                                            ") lies outside the reference");
  }
  const AnalysisConfig cfg = s->config;
  const Palette palette = reference_palette(*s, ClusterMode::Color, cfg);
  return encode_png(isolate_color_preview(s->reference, palette, x, y, cfg.region_threshold));
}

Json Service::update_canvas(const std::string& id, std::span<const std::uint8_t> png) {
  ImageBuffer decoded = decode_png(png, cfg_.max_pixels);
  auto s = find(id);
  const bool resampled =
      decoded.width() != s->reference.width() || decoded.height() != s->reference.height();
  ImageBuffer canvas = resample_letterbox(decoded, s->reference.width(), s->reference.height());
  std::unique_lock lock(s->mutex);
  s->canvas = std::move(canvas);
  ++s->canvas_version;
  persist_canvas(*s);
  return {{"width", s->canvas->width()},
          {"height", s->canvas->height()},
          {"resampled", resampled},
          {"canvas_version", s->canvas_version}};
}

Bytes Service::recolor(const std::string& id, std::span<const NormPoint> lasso, double hue_deg,
                       double saturation) {
  if (!(saturation >= 0.0 && saturation <= 1.0)) {
    throw Error(ErrorCode::BadRequest, "saturation must lie in [0, 1]");
  }
  if (!std::isfinite(hue_deg)) throw Error(ErrorCode::BadRequest, "hue must be finite");
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  const ImageBuffer& canvas = target_image(*s, Target::Canvas);
  const Mask region = rasterize_polygon(lasso, canvas.width(), canvas.height());
  s->canvas = recolor_region(canvas, region, wrap_degrees(hue_deg), saturation);
  ++s->canvas_version;
  persist_canvas(*s);
  return encode_png(*s->canvas);
}

Bytes Service::image_png(const std::string& id, Target target) const {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  return encode_png(target_image(*s, target));
}

void Service::persist_new(const Session& s) const {
  if (!cfg_.store_dir) return;
  const fs::path dir = *cfg_.store_dir / s.id;
  fs::create_directories(dir);
  save_png(dir / "reference.png", s.reference);
  persist_config(s);
}

void Service::persist_canvas(const Session& s) const {
  if (!cfg_.store_dir || !s.canvas) return;
  save_png(*cfg_.store_dir / s.id / "canvas.png", *s.canvas);
  persist_config(s);
}

void Service::persist_config(const Session& s) const {
  if (!cfg_.store_dir) return;
  const Json doc{{"id", s.id}, {"canvas_version", s.canvas_version}, {"config", to_json(s.config)}};
  write_file(*cfg_.store_dir / s.id / "session.json", doc.dump(2));
}

void Service::load_persisted() {
  std::error_code ec;
  fs::create_directories(*cfg_.store_dir, ec);
  for (const auto& entry : fs::directory_iterator(*cfg_.store_dir, ec)) {
    const std::string id = entry.path().filename().string();
    if (!entry.is_directory() || !valid_id(id)) continue;
    try {
      const Bytes meta_raw = read_file(entry.path() / "session.json");
      const Json meta = Json::parse(meta_raw.begin(), meta_raw.end());
      auto s = std::make_shared<Session>(id, load_png(entry.path() / "reference.png"),
                                         analysis_from_json(meta.at("config"), cfg_.defaults));
      s->canvas_version = meta.value("canvas_version", std::uint64_t{0});
      if (fs::exists(entry.path() / "canvas.png")) s->canvas = load_png(entry.path() / "canvas.png");
      sessions_.emplace(id, std::move(s));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "atelier: skipping stored session %s: %s\n", id.c_str(), e.what());
    }
  }
}

}  // namespace atelier::service
