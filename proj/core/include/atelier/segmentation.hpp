#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "atelier/geometry.hpp"
#include "atelier/image.hpp"

namespace atelier {

enum class MaskSource { Text, Box };

std::string_view to_string(MaskSource s) noexcept;

struct TaggedBox {
  BoundingBox box;
  MaskSource source = MaskSource::Box;
};

/// Objects of interest: a comma-separated noun list and/or user boxes.
struct SegmentationPrompt {
  std::optional<std::string> text;
  std::vector<BoundingBox> boxes;

  bool has_text() const noexcept { return text.has_value() && !text->empty(); }
};

struct LabeledMask {
  Mask mask;
  std::string label;
  MaskSource source = MaskSource::Box;
  double confidence = 1.0;
};

struct SegmentationResult {
  std::vector<LabeledMask> masks;
  std::string provider;
  /// True when masks are box interiors rather than model output.
  bool box_fallback = false;
};

class SegmentationProvider {
 public:
  virtual ~SegmentationProvider() = default;
  virtual std::string name() const = 0;
  /// Implementations throw Error(NoDetections) when nothing was found and
  /// Error(ProviderUnavailable) when the backend cannot be reached.
  virtual SegmentationResult run(const ImageBuffer& image, const SegmentationPrompt& prompt) = 0;
};

/// Text-derived boxes first, then user boxes; duplicates are kept.
std::vector<TaggedBox> merge_box_sources(const std::vector<BoundingBox>& text_boxes,
                                         const std::vector<BoundingBox>& user_boxes);

/// Validates the prompt, runs the provider and checks that every mask matches
/// the image dimensions and carries a label.
SegmentationResult segment(const ImageBuffer& image, const SegmentationPrompt& prompt,
                           SegmentationProvider& provider);

/// Mask := box interior. Text prompts cannot be resolved offline and
/// contribute no masks.
class BoxFallbackProvider final : public SegmentationProvider {
 public:
  std::string name() const override { return "box"; }
  SegmentationResult run(const ImageBuffer& image, const SegmentationPrompt& prompt) override;
};

/// Directory of `<label>.png` grayscale masks, read in filename order and
/// resampled to the request image when sizes differ. User boxes are appended
/// as box-interior masks.
class MaskDirectoryProvider final : public SegmentationProvider {
 public:
  explicit MaskDirectoryProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::string name() const override { return "files"; }
  SegmentationResult run(const ImageBuffer& image, const SegmentationPrompt& prompt) override;

 private:
  std::filesystem::path dir_;
};

/// HTTP client for the model sidecar: POST /segment.
class SidecarProvider final : public SegmentationProvider {
 public:
  SidecarProvider(std::string base_url, std::chrono::milliseconds timeout);
  std::string name() const override { return "sidecar"; }
  SegmentationResult run(const ImageBuffer& image, const SegmentationPrompt& prompt) override;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

/// {image_png_b64, text_prompt?, boxes?: [[x0,y0,x1,y1], ...]}
nlohmann::json encode_sidecar_request(const ImageBuffer& image, const SegmentationPrompt& prompt);

/// Parses {masks: [{png_b64, label, source, confidence}]}; masks are resampled
/// to width x height when needed. Throws Error(BadRequest) on schema errors.
SegmentationResult decode_sidecar_response(const nlohmann::json& body, int width, int height);

struct ProviderConfig {
  std::string kind = "box";  // box | files | sidecar
  std::filesystem::path mask_dir;
  std::string sidecar_url = "http://127.0.0.1:8765";
  std::chrono::milliseconds timeout{30000};
};

std::unique_ptr<SegmentationProvider> make_provider(const ProviderConfig& cfg);

}  // namespace atelier
