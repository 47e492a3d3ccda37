#include "atelier/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <set>

#include "atelier/error.hpp"
#include "atelier/png_io.hpp"

namespace atelier::service {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const char* where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::InvalidConfig, std::string("unknown key '") + key + "' in " + where);
    }
  }
}

template <typename T>
T parse_number(const std::string& name, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::InvalidConfig, name + " is not a valid number: '" + text + "'");
  }
  return value;
}

BlurSpec blur_from_json(const Json& j, BlurSpec base) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "blur must be an object");
  reject_unknown(j, {"filter", "kernel_size", "range_sigma"}, "blur");
  if (j.contains("filter")) {
    const auto f = parse_blur_filter(j["filter"].get<std::string>());
    if (!f) throw Error(ErrorCode::InvalidConfig, "unknown blur filter");
    base.filter = *f;
  }
  base.kernel_size = j.value("kernel_size", base.kernel_size);
  base.range_sigma = j.value("range_sigma", base.range_sigma);
  return base;
}

}  // namespace

void AnalysisConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) {
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in [0, 0.5]");
  }
  ransac.validate();
  if (k_lines > 64) throw Error(ErrorCode::InvalidConfig, "k_lines must lie in [0, 64]");
  if (palette_k < 1 || palette_k > 16) {
    throw Error(ErrorCode::InvalidConfig, "palette_k must lie in [1, 16]");
  }
  try {
    blur.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  if (tolerances.value < 0 || tolerances.hue < 0 || tolerances.saturation < 0) {
    throw Error(ErrorCode::InvalidConfig, "tolerances must be non-negative");
  }
  if (!(region_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "region_threshold must be positive");
  }
}

Json to_json(const AnalysisConfig& cfg) {
  return {{"epsilon", cfg.epsilon},
          {"ransac", atelier::to_json(cfg.ransac)},
          {"k_lines", cfg.k_lines},
          {"palette_k", cfg.palette_k},
          {"palette_seed", cfg.palette_seed},
          {"blur", atelier::to_json(cfg.blur)},
          {"tolerances", atelier::to_json(cfg.tolerances)},
          {"region_threshold", cfg.region_threshold}};
}

AnalysisConfig analysis_from_json(const Json& j, AnalysisConfig base) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  reject_unknown(j,
                 {"epsilon", "ransac", "k_lines", "palette_k", "palette_seed", "blur",
                  "tolerances", "region_threshold"},
                 "config");
  try {
    base.epsilon = j.value("epsilon", base.epsilon);
    if (j.contains("ransac")) {
      reject_unknown(j["ransac"], {"theta_dis", "theta_inl", "iterations", "seed", "max_lines"},
                     "ransac");
      base.ransac = ransac_from_json(j["ransac"], base.ransac);
    }
    base.k_lines = j.value("k_lines", base.k_lines);
    base.palette_k = j.value("palette_k", base.palette_k);
    base.palette_seed = j.value("palette_seed", base.palette_seed);
    if (j.contains("blur")) base.blur = blur_from_json(j["blur"], base.blur);
    if (j.contains("tolerances")) {
      reject_unknown(j["tolerances"], {"value", "hue", "saturation"}, "tolerances");
      base.tolerances = tolerances_from_json(j["tolerances"], base.tolerances);
    }
    base.region_threshold = j.value("region_threshold", base.region_threshold);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config field has the wrong type: ") + e.what());
  }
  base.validate();
  return base;
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

ServiceConfig service_config_from_json(const Json& j, ServiceConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config file must hold a JSON object");
  reject_unknown(j, {"analysis", "provider", "listen", "max_pixels", "worker_threads", "store_dir"},
                 "config file");
  try {
    if (j.contains("analysis")) base.defaults = analysis_from_json(j["analysis"], base.defaults);
    if (j.contains("provider")) {
      const Json& p = j["provider"];
      reject_unknown(p, {"kind", "mask_dir", "sidecar_url", "timeout_ms"}, "provider");
      base.provider.kind = p.value("kind", base.provider.kind);
      if (p.contains("mask_dir")) base.provider.mask_dir = p["mask_dir"].get<std::string>();
      base.provider.sidecar_url = p.value("sidecar_url", base.provider.sidecar_url);
      base.provider.timeout =
          std::chrono::milliseconds(p.value("timeout_ms", base.provider.timeout.count()));
    }
    if (j.contains("listen")) {
      const Json& l = j["listen"];
      reject_unknown(l, {"host", "port"}, "listen");
      base.host = l.value("host", base.host);
      base.port = l.value("port", base.port);
    }
    base.max_pixels = j.value("max_pixels", base.max_pixels);
    base.worker_threads = j.value("worker_threads", base.worker_threads);
    if (j.contains("store_dir")) base.store_dir = j["store_dir"].get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config file field has the wrong type: ") +
                                              e.what());
  }
  return base;
}

void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env) {
  auto get = [&env](const char* name) { return env(name); };
  if (auto v = get("ATELIER_PROVIDER")) cfg.provider.kind = *v;
  if (auto v = get("ATELIER_MASK_DIR")) cfg.provider.mask_dir = *v;
  if (auto v = get("ATELIER_SIDECAR_URL")) cfg.provider.sidecar_url = *v;
  if (auto v = get("ATELIER_SIDECAR_TIMEOUT_MS")) {
    cfg.provider.timeout = std::chrono::milliseconds(parse_number<long>("ATELIER_SIDECAR_TIMEOUT_MS", *v));
  }
  if (auto v = get("ATELIER_HOST")) cfg.host = *v;
  if (auto v = get("ATELIER_PORT")) cfg.port = parse_number<int>("ATELIER_PORT", *v);
  if (auto v = get("ATELIER_MAX_PIXELS")) {
    cfg.max_pixels = parse_number<std::size_t>("ATELIER_MAX_PIXELS", *v);
  }
  if (auto v = get("ATELIER_STORE_DIR")) cfg.store_dir = *v;
  AnalysisConfig& a = cfg.defaults;
  if (auto v = get("ATELIER_EPSILON")) a.epsilon = parse_number<double>("ATELIER_EPSILON", *v);
  if (auto v = get("ATELIER_K_LINES")) a.k_lines = parse_number<std::size_t>("ATELIER_K_LINES", *v);
  if (auto v = get("ATELIER_PALETTE_K")) a.palette_k = parse_number<int>("ATELIER_PALETTE_K", *v);
  if (auto v = get("ATELIER_THETA_DIS")) a.ransac.theta_dis = parse_number<double>("ATELIER_THETA_DIS", *v);
  if (auto v = get("ATELIER_THETA_INL")) a.ransac.theta_inl = parse_number<double>("ATELIER_THETA_INL", *v);
  if (auto v = get("ATELIER_SEED")) a.ransac.seed = parse_number<std::uint64_t>("ATELIER_SEED", *v);
  a.validate();
}

ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env) {
  ServiceConfig cfg;
  if (file) {
    const Bytes raw = read_file(*file);
    const Json j = Json::parse(raw.begin(), raw.end(), nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::InvalidConfig, "config file is not valid JSON: " + file->string());
    }
    cfg = service_config_from_json(j, cfg);
  }
  apply_env_overrides(cfg, env);
  cfg.defaults.validate();
  return cfg;
}

}  // namespace atelier::service
