#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "atelier/composition.hpp"
#include "atelier/filters.hpp"
#include "atelier/json_io.hpp"
#include "atelier/matching.hpp"
#include "atelier/segmentation.hpp"

namespace atelier::service {

/// Per-session analysis parameters. Embedded verbatim in every response so a
/// request can be replayed.
struct AnalysisConfig {
  double epsilon = kDefaultRdpEpsilon;
  RansacConfig ransac;
  std::size_t k_lines = 4;
  int palette_k = 5;
  std::uint64_t palette_seed = 0;
  BlurSpec blur;
  FeedbackTolerances tolerances;
  double region_threshold = 5.0;

  /// Throws Error(InvalidConfig).
  void validate() const;
};

Json to_json(const AnalysisConfig& cfg);
/// Overlays the keys present in `j` on `base`; unknown keys are rejected.
AnalysisConfig analysis_from_json(const Json& j, AnalysisConfig base = {});

struct ServiceConfig {
  AnalysisConfig defaults;
  ProviderConfig provider;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_pixels = 32'000'000;
  int worker_threads = 8;
  /// Sessions are mirrored here as reference.png / canvas.png / session.json.
  std::optional<std::filesystem::path> store_dir;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads ATELIER_* variables through the process environment.
std::optional<std::string> process_env(const std::string& name);

ServiceConfig service_config_from_json(const Json& j, ServiceConfig base = {});
void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env = process_env);

/// File (optional) then environment.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env = process_env);

}  // namespace atelier::service
