#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>

#include "atelier/palette.hpp"
#include "atelier/png_io.hpp"
#include "atelier/segmentation.hpp"
#include "atelier/service/config.hpp"

namespace atelier::service {

enum class Target { Reference, Canvas };

/// Unset fields fall back to the session's blur.
struct BlurOverride {
  std::optional<BlurFilter> filter;
  std::optional<double> kernel_size;
};

std::string_view to_string(Target t) noexcept;
/// Throws Error(BadRequest).
Target parse_target(std::string_view name);

struct Session {
  Session(std::string session_id, ImageBuffer ref, AnalysisConfig cfg)
      : id(std::move(session_id)), reference(std::move(ref)), config(cfg) {}

  const std::string id;
  const ImageBuffer reference;
  std::optional<ImageBuffer> canvas;
  AnalysisConfig config;
  std::uint64_t canvas_version = 0;

  /// Readers take it shared, canvas/config writers exclusive.
  mutable std::shared_mutex mutex;

  // Memoized reference-only results. Guarded by cache_mutex, which is only
  // held around lookups and inserts.
  mutable std::mutex cache_mutex;
  mutable std::map<std::string, Palette> palette_cache;
  mutable std::map<std::string, SegmentationResult> segmentation_cache;
};

/// Session store plus the guidance/feedback operations. All methods are safe
/// to call concurrently.
class Service {
 public:
  explicit Service(ServiceConfig cfg, std::shared_ptr<SegmentationProvider> provider = nullptr);

  const ServiceConfig& config() const noexcept { return cfg_; }
  const SegmentationProvider& provider() const noexcept { return *provider_; }

  /// -> {id, width, height, config}. Errors: BadImage, TooLarge.
  Json create_session(std::span<const std::uint8_t> png);
  Json session_info(const std::string& id) const;
  void delete_session(const std::string& id);
  std::size_t session_count() const;

  Json session_config(const std::string& id) const;
  /// Partial update; returns the full config.
  Json update_config(const std::string& id, const Json& patch);

  /// Request: {prompt?, boxes?, epsilon?, k?, config?}.
  /// Response: {config, seed, epsilon_used, provider, box_fallback,
  /// sampled_points, polygons, lines, grids}.
  Json composition_guidance(const std::string& id, const Json& request) const;

  /// Request: {config?}. Response: {config, mode, pairs, reference_palette,
  /// canvas_palette}. Errors: NoCanvas, AllPixelsFiltered.
  Json feedback(const std::string& id, ClusterMode mode, const Json& request = Json::object()) const;
  Json value_feedback(const std::string& id, const Json& request = Json::object()) const {
    return feedback(id, ClusterMode::Value, request);
  }
  Json color_feedback(const std::string& id, const Json& request = Json::object()) const {
    return feedback(id, ClusterMode::Color, request);
  }

  /// Value image of `target` blurred with the session blur plus overrides.
  /// Errors: NoCanvas, InvalidKernel.
  Bytes value_guidance(const std::string& id, Target target, const BlurOverride& blur = {}) const;
  /// Pixel coordinates on the reference.
  Bytes color_isolation(const std::string& id, int x, int y) const;

  /// -> {width, height, resampled}. The stored canvas always has reference
  /// dimensions.
  Json update_canvas(const std::string& id, std::span<const std::uint8_t> png);
  /// Lasso in normalized coordinates, hue in degrees, saturation in [0, 1].
  Bytes recolor(const std::string& id, std::span<const NormPoint> lasso, double hue_deg,
                double saturation);

  Bytes image_png(const std::string& id, Target target) const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  Palette reference_palette(const Session& s, ClusterMode mode, const AnalysisConfig& cfg) const;
  SegmentationResult cached_segmentation(const Session& s, const SegmentationPrompt& prompt) const;
  std::string new_id();

  void persist_new(const Session& s) const;
  void persist_canvas(const Session& s) const;
  void persist_config(const Session& s) const;
  void load_persisted();

  ServiceConfig cfg_;
  std::shared_ptr<SegmentationProvider> provider_;
  mutable std::shared_mutex store_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex id_mutex_;
};

}  // namespace atelier::service
