#include "atelier/segmentation.hpp"

#include <httplib.h>

#include <algorithm>

#include "atelier/error.hpp"
#include "atelier/filters.hpp"
#include "atelier/png_io.hpp"

namespace atelier {

namespace {

std::vector<LabeledMask> box_masks(const std::vector<TaggedBox>& boxes, int width, int height) {
  std::vector<LabeledMask> out;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    LabeledMask m;
    m.mask = rasterize_box(boxes[i].box.normalized(), width, height);
    m.label = "box " + std::to_string(i + 1);
    m.source = boxes[i].source;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::string_view to_string(MaskSource s) noexcept { return s == MaskSource::Text ? "text" : "box"; }

std::vector<TaggedBox> merge_box_sources(const std::vector<BoundingBox>& text_boxes,
                                         const std::vector<BoundingBox>& user_boxes) {
  std::vector<TaggedBox> all;
  all.reserve(text_boxes.size() + user_boxes.size());
  for (const BoundingBox& b : text_boxes) all.push_back({b, MaskSource::Text});
  for (const BoundingBox& b : user_boxes) all.push_back({b, MaskSource::Box});
  return all;
}

SegmentationResult segment(const ImageBuffer& image, const SegmentationPrompt& prompt,
                           SegmentationProvider& provider) {
  if (!prompt.has_text() && prompt.boxes.empty()) {
    throw Error(ErrorCode::BadRequest, "segmentation needs a text prompt or at least one box");
  }
  SegmentationResult result = provider.run(image, prompt);
  if (result.masks.empty()) throw Error(ErrorCode::NoDetections, "no objects were segmented");
  for (LabeledMask& m : result.masks) {
    if (m.mask.width() != image.width() || m.mask.height() != image.height()) {
      throw Error(ErrorCode::DimensionMismatch, "provider returned a mask of the wrong size");
    }
    if (m.label.empty()) m.label = "object";
  }
  if (result.provider.empty()) result.provider = provider.name();
  return result;
}

SegmentationResult BoxFallbackProvider::run(const ImageBuffer& image,
                                            const SegmentationPrompt& prompt) {
  if (prompt.boxes.empty()) {
    throw Error(ErrorCode::NoDetections,
                "the box provider cannot resolve text prompts; draw boxes instead");
  }
  SegmentationResult r;
  r.provider = name();
  r.box_fallback = true;
  r.masks = box_masks(merge_box_sources({}, prompt.boxes), image.width(), image.height());
  return r;
}

SegmentationResult MaskDirectoryProvider::run(const ImageBuffer& image,
                                              const SegmentationPrompt& prompt) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) {
    throw Error(ErrorCode::ProviderUnavailable, "mask directory not found: " + dir_.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  SegmentationResult r;
  r.provider = name();
  for (const auto& f : files) {
    LabeledMask m;
    m.mask = resample_nearest(load_mask_png(f), image.width(), image.height());
    m.label = f.stem().string();
    m.source = MaskSource::Text;
    r.masks.push_back(std::move(m));
  }
  auto boxes = box_masks(merge_box_sources({}, prompt.boxes), image.width(), image.height());
  r.box_fallback = !boxes.empty();
  for (auto& b : boxes) r.masks.push_back(std::move(b));
  if (r.masks.empty()) throw Error(ErrorCode::NoDetections, "mask directory is empty");
  return r;
}

SidecarProvider::SidecarProvider(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

SegmentationResult SidecarProvider::run(const ImageBuffer& image, const SegmentationPrompt& prompt) {
  httplib::Client client(base_url_);
  if (!client.is_valid()) {
    throw Error(ErrorCode::ProviderUnavailable, "invalid sidecar url: " + base_url_);
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const std::string body = encode_sidecar_request(image, prompt).dump();
  auto res = client.Post("/segment", body, "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write) {
      throw Error(ErrorCode::Timeout, "sidecar did not answer in time");
    }
    throw Error(ErrorCode::ProviderUnavailable,
                "sidecar unreachable at " + base_url_ + ": " + httplib::to_string(err));
  }
  if (res->status == 503) throw Error(ErrorCode::ProviderUnavailable, "sidecar model not loaded");
  if (res->status == 400) throw Error(ErrorCode::BadRequest, "sidecar rejected the request: " + res->body);
  if (res->status != 200) {
    throw Error(ErrorCode::ProviderUnavailable, "sidecar returned HTTP " + std::to_string(res->status));
  }
  nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) throw Error(ErrorCode::BadRequest, "sidecar returned invalid JSON");
  SegmentationResult r = decode_sidecar_response(parsed, image.width(), image.height());
  r.provider = name();
  if (r.masks.empty()) throw Error(ErrorCode::NoDetections, "sidecar found no objects");
  return r;
}

nlohmann::json encode_sidecar_request(const ImageBuffer& image, const SegmentationPrompt& prompt) {
  nlohmann::json j;
  j["image_png_b64"] = base64_encode(encode_png(image));
  if (prompt.has_text()) j["text_prompt"] = *prompt.text;
  if (!prompt.boxes.empty()) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const BoundingBox& b : prompt.boxes) boxes.push_back({b.x_min, b.y_min, b.x_max, b.y_max});
    j["boxes"] = std::move(boxes);
  }
  return j;
}

SegmentationResult decode_sidecar_response(const nlohmann::json& body, int width, int height) {
  if (!body.is_object() || !body.contains("masks") || !body["masks"].is_array()) {
    throw Error(ErrorCode::BadRequest, "sidecar response lacks a masks array");
  }
  SegmentationResult r;
  for (const auto& item : body["masks"]) {
    if (!item.is_object() || !item.contains("png_b64") || !item["png_b64"].is_string()) {
      throw Error(ErrorCode::BadRequest, "sidecar mask entry lacks png_b64");
    }
    LabeledMask m;
    m.mask = resample_nearest(decode_mask_png(base64_decode(item["png_b64"].get<std::string>())),
                              width, height);
    m.label = item.value("label", std::string{});
    const std::string source = item.value("source", std::string{"text"});
    if (source != "text" && source != "box") {
      throw Error(ErrorCode::BadRequest, "unknown mask source '" + source + "'");
    }
    m.source = source == "box" ? MaskSource::Box : MaskSource::Text;
    m.confidence = item.value("confidence", 1.0);
    r.masks.push_back(std::move(m));
  }
  return r;
}

std::unique_ptr<SegmentationProvider> make_provider(const ProviderConfig& cfg) {
  if (cfg.kind == "box") return std::make_unique<BoxFallbackProvider>();
  if (cfg.kind == "files") return std::make_unique<MaskDirectoryProvider>(cfg.mask_dir);
  if (cfg.kind == "sidecar") return std::make_unique<SidecarProvider>(cfg.sidecar_url, cfg.timeout);
  throw Error(ErrorCode::InvalidConfig, "unknown segmentation provider '" + cfg.kind + "'");
}

}  // namespace atelier
