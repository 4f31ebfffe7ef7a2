#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vodsim/clustering.hpp"
#include "vodsim/types.hpp"

// Key-value run configuration. Every knob has an embedded default
// matching the published tables; a config file only overrides.

namespace vodsim::config {

struct SimConfig {
  // scenario scale
  int n_videos = 2000;              // desk scale
  int paper_scale_n_videos = 50000; // --paper-scale
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int threads = 1;

  // workload
  GopStats gop_stats;
  TranscodeTimeModel time_model;
  DecayModel decay;
  double weibull_scale = 1.0;
  std::vector<double> weibull_shapes = {0.4, 0.6, 1.0, 1.4, 1.8, 2.4};
  std::vector<double> fav_targets_pct = {30, 25, 20, 15, 10, 5};
  double anchor_shape = 1.0;  // shape whose target pins the view scale
  double calibration_tol_pct = 1.0;

  // view growth sweep
  std::vector<double> view_growth_steps_pct = {1, 2, 3, 4, 5};
  double growth_horizon_months = 18.0;  // growth g% compounds over this horizon

  // pricing & clustering
  PricingCatalog pricing;
  cluster::KMeansConfig kmeans;

  double fav_target_for_shape(double shape) const {
    for (std::size_t i = 0; i < weibull_shapes.size(); ++i)
      if (weibull_shapes[i] == shape) return fav_targets_pct[i];
    throw ConfigError("no FAV target configured for shape " + std::to_string(shape));
  }

  // Views multiplier applied at growth step g%: compound growth over the
  // configured horizon. Reported alongside results, since the published
  // curves scale absolute repository views rather than adding g points.
  double growth_multiplier(double growth_pct) const {
    return std::pow(1.0 + growth_pct / 100.0, growth_horizon_months);
  }

  void validate() const {
    if (n_videos < 1 || paper_scale_n_videos < 1)
      throw ConfigError("config: n_videos must be >= 1");
    if (seeds.empty()) throw ConfigError("config: seeds must be non-empty");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
    gop_stats.validate();
    time_model.validate();
    decay.validate();
    pricing.validate();
    kmeans.validate();
    if (weibull_scale <= 0.0) throw ConfigError("config: weibull_scale must be positive");
    if (weibull_shapes.empty() || weibull_shapes.size() != fav_targets_pct.size())
      throw ConfigError("config: weibull_shapes and fav_targets_pct must align");
    for (double s : weibull_shapes)
      if (s <= 0.0) throw ConfigError("config: weibull shapes must be positive");
    for (double t : fav_targets_pct)
      if (t <= 0.0 || t > 100.0) throw ConfigError("config: FAV targets in (0,100]");
    for (double g : view_growth_steps_pct)
      if (g < 0.0) throw ConfigError("config: growth steps must be >= 0");
    if (growth_horizon_months <= 0.0)
      throw ConfigError("config: growth horizon must be positive");
    if (calibration_tol_pct <= 0.0)
      throw ConfigError("config: calibration tolerance must be positive");
    fav_target_for_shape(anchor_shape);  // anchor must be one of the shapes
  }
};

namespace detail_cfg {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& v, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty list element in " + key);
    out.push_back(parse(key, item));
  }
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

}  // namespace detail_cfg

// Applies one `key = value` pair. Unknown keys are errors: a typo must
// not silently fall back to a default.
inline void apply_key(SimConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail_cfg;
  if (key == "n_videos") cfg.n_videos = static_cast<int>(parse_int(key, value));
  else if (key == "paper_scale_n_videos")
    cfg.paper_scale_n_videos = static_cast<int>(parse_int(key, value));
  else if (key == "seeds")
    cfg.seeds = parse_list<std::uint64_t>(key, value, [](const std::string& k, const std::string& v) {
      return static_cast<std::uint64_t>(parse_int(k, v));
    });
  else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
  else if (key == "gop_size_mean_kb") cfg.gop_stats.size_mean_kb = parse_double(key, value);
  else if (key == "gop_size_std_kb") cfg.gop_stats.size_std_kb = parse_double(key, value);
  else if (key == "gop_size_min_kb") cfg.gop_stats.size_min_kb = parse_double(key, value);
  else if (key == "gop_size_max_kb") cfg.gop_stats.size_max_kb = parse_double(key, value);
  else if (key == "gop_count_mean") cfg.gop_stats.count_mean = parse_double(key, value);
  else if (key == "gop_count_std") cfg.gop_stats.count_std = parse_double(key, value);
  else if (key == "gop_count_min") cfg.gop_stats.count_min = static_cast<int>(parse_int(key, value));
  else if (key == "gop_count_max") cfg.gop_stats.count_max = static_cast<int>(parse_int(key, value));
  else if (key == "transcode_slope_s_per_kb") cfg.time_model.slope_s_per_kb = parse_double(key, value);
  else if (key == "transcode_intercept_s") cfg.time_model.intercept_s = parse_double(key, value);
  else if (key == "decay_alpha") cfg.decay.alpha = parse_double(key, value);
  else if (key == "weibull_scale") cfg.weibull_scale = parse_double(key, value);
  else if (key == "weibull_shapes")
    cfg.weibull_shapes = parse_list<double>(key, value, parse_double);
  else if (key == "fav_targets_pct")
    cfg.fav_targets_pct = parse_list<double>(key, value, parse_double);
  else if (key == "anchor_shape") cfg.anchor_shape = parse_double(key, value);
  else if (key == "calibration_tol_pct") cfg.calibration_tol_pct = parse_double(key, value);
  else if (key == "view_growth_steps_pct")
    cfg.view_growth_steps_pct = parse_list<double>(key, value, parse_double);
  else if (key == "growth_horizon_months") cfg.growth_horizon_months = parse_double(key, value);
  else if (key == "price_storage_tier1") cfg.pricing.storage_tier1 = parse_double(key, value);
  else if (key == "price_storage_tier2") cfg.pricing.storage_tier2 = parse_double(key, value);
  else if (key == "price_storage_tier3") cfg.pricing.storage_tier3 = parse_double(key, value);
  else if (key == "price_storage_tier4") cfg.pricing.storage_tier4 = parse_double(key, value);
  else if (key == "price_transcode_per_hour") cfg.pricing.transcode_per_hour = parse_double(key, value);
  else if (key == "price_cdn_per_gb_month") cfg.pricing.cdn_per_gb_month = parse_double(key, value);
  else if (key == "cdn_enabled") cfg.pricing.cdn_enabled = parse_bool(key, value);
  else if (key == "cdn_replication") cfg.pricing.cdn_replication = parse_double(key, value);
  else if (key == "kmeans_k") cfg.kmeans.k = static_cast<int>(parse_int(key, value));
  else if (key == "kmeans_seed") cfg.kmeans.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "kmeans_tol") cfg.kmeans.tol = parse_double(key, value);
  else if (key == "kmeans_max_iter") cfg.kmeans.max_iter = static_cast<int>(parse_int(key, value));
  else if (key == "kmeans_restarts") cfg.kmeans.restarts = static_cast<int>(parse_int(key, value));
  else throw ConfigError("config: unknown key '" + key + "'");
}

inline SimConfig parse_config(std::istream& in) {
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail_cfg::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
    std::string key = detail_cfg::trim(line.substr(0, eq));
    std::string value = detail_cfg::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(lineno) + " has empty key or value");
    apply_key(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  return parse_config(in);
}

}  // namespace vodsim::config
