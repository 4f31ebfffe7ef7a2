#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vodsim/costmodel.hpp"
#include "vodsim/parallel.hpp"
#include "vodsim/rng.hpp"
#include "vodsim/types.hpp"

// Synthesizes reproducible video repositories matching the fitted GOP
// distributions and assigns long-tail monthly view counts.

namespace vodsim::workload {

inline constexpr int kMaxRedraws = 10000;

// Truncated-Gaussian GOP count. Rejection sampling, not clamping:
// clamping would put probability atoms on the bounds.
inline int sample_gop_count(std::mt19937_64& gen, const GopStats& stats) {
  stats.validate();
  if (stats.count_std == 0.0) {
    long v = std::lround(stats.count_mean);
    if (v < stats.count_min || v > stats.count_max)
      throw ConfigError("sample_gop_count: degenerate mean outside bounds");
    return static_cast<int>(v);
  }
  std::normal_distribution<double> dist(stats.count_mean, stats.count_std);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    long v = std::lround(dist(gen));
    if (v >= stats.count_min && v <= stats.count_max) return static_cast<int>(v);
  }
  throw ConfigError("sample_gop_count: rejection sampling exhausted");
}

// Truncated-Gaussian GOP size, drawn in kilobytes and returned in
// megabytes (the unit the storage cost equation consumes).
inline double sample_gop_size_mb(std::mt19937_64& gen, const GopStats& stats) {
  stats.validate();
  if (stats.size_std_kb == 0.0) {
    if (stats.size_mean_kb < stats.size_min_kb || stats.size_mean_kb > stats.size_max_kb)
      throw ConfigError("sample_gop_size_mb: degenerate mean outside bounds");
    return stats.size_mean_kb / cost::kKbPerMb;
  }
  std::normal_distribution<double> dist(stats.size_mean_kb, stats.size_std_kb);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    double kb = dist(gen);
    if (kb >= stats.size_min_kb && kb <= stats.size_max_kb) return kb / cost::kKbPerMb;
  }
  throw ConfigError("sample_gop_size_mb: rejection sampling exhausted");
}

// Linear regression estimate of the transcoding time for one GOP.
inline double transcode_time_s(double size_mb, const TranscodeTimeModel& model) {
  if (size_mb <= 0.0) throw std::invalid_argument("transcode_time_s: size must be positive");
  double t = model.slope_s_per_kb * (size_mb * cost::kKbPerMb) + model.intercept_s;
  if (t <= 0.0) throw ConfigError("transcode_time_s: model predicts non-positive time");
  return t;
}

// n_videos independent videos; each draws its own GOP count and i.i.d.
// GOP sizes from a per-video substream, so the result is identical for
// any thread count.
inline Repository synthesize_repository(std::uint64_t master_seed, int n_videos,
                                        const GopStats& stats,
                                        const TranscodeTimeModel& time_model,
                                        int threads = 1) {
  if (n_videos < 1) throw std::invalid_argument("synthesize_repository: n_videos >= 1");
  stats.validate();
  time_model.validate();
  Repository repo(static_cast<std::size_t>(n_videos));
  detail::parallel_for(repo.size(), threads, [&](std::size_t i) {
    Video& video = repo[i];
    video.id = static_cast<std::uint64_t>(i) + 1;
    video.views = 0.0;
    auto gen = rng::make_stream(master_seed, rng::StreamTag::kGopStructure, video.id);
    int count = sample_gop_count(gen, stats);
    video.gops.resize(count);
    for (int j = 0; j < count; ++j) {
      Gop& g = video.gops[j];
      g.index = static_cast<std::uint32_t>(j) + 1;
      g.size_mb = sample_gop_size_mb(gen, stats);
      g.transcode_time_s = transcode_time_s(g.size_mb, time_model);
      g.est_views = 0.0;
    }
  });
  return repo;
}

// Monthly views per video: round(view_scale * Weibull(shape, scale)).
// Views use their own substream, so re-assigning with a different shape
// reuses the same underlying uniform draw per video.
inline void assign_views(std::uint64_t master_seed, Repository& repo,
                         const ViewModel& model, int threads = 1) {
  if (repo.empty()) throw std::invalid_argument("assign_views: empty repository");
  model.validate();
  detail::parallel_for(repo.size(), threads, [&](std::size_t i) {
    auto gen = rng::make_stream(master_seed, rng::StreamTag::kViews, repo[i].id);
    std::weibull_distribution<double> dist(model.weibull_shape, model.weibull_scale);
    repo[i].views = std::round(model.view_scale * dist(gen));
  });
}

// Fraction of videos whose storage is strictly cheaper than on-demand
// transcoding (video ratio < 1): the frequently accessed videos.
inline double fav_fraction(const Repository& repo, const PricingCatalog& pricing,
                           const DecayModel& decay) {
  if (repo.empty()) throw std::invalid_argument("fav_fraction: empty repository");
  std::size_t fav = 0;
  for (const Video& v : repo)
    if (cost::video_ratio(v, pricing, decay) < 1.0) ++fav;
  return static_cast<double>(fav) / static_cast<double>(repo.size());
}

struct CalibrationResult {
  double view_scale = 0.0;
  double achieved_fraction = 0.0;
  int iterations = 0;
};

namespace detail_calib {

// A video is frequently accessed iff views > critical (ratio < 1);
// critical = storage cost over per-view transcoding cost.
inline std::vector<double> critical_views(const Repository& repo,
                                          const PricingCatalog& pricing,
                                          const DecayModel& decay) {
  double price = cost::effective_storage_price(pricing, StorageTier::kStandard);
  std::vector<double> crit(repo.size());
  for (std::size_t i = 0; i < repo.size(); ++i) {
    const Video& v = repo[i];
    double sc = cost::video_storage_cost(v, price);
    double tc_per_view = 0.0;
    for (const Gop& g : v.gops) {
      double xi1 = cost::gop_views(1.0, g.index, decay);
      tc_per_view +=
          cost::gop_transcode_cost(xi1, g.transcode_time_s, pricing.transcode_per_hour);
    }
    crit[i] = tc_per_view > 0.0 ? sc / tc_per_view
                                : std::numeric_limits<double>::infinity();
  }
  return crit;
}

}  // namespace detail_calib

// Binary-searches the view_scale multiplier so that the repository's
// frequently-accessed fraction under (shape, weibull_scale) hits
// target_fraction. Uses the same per-video Weibull draws that
// assign_views would consume, so assigning views at the returned scale
// reproduces the achieved fraction.
inline CalibrationResult calibrate_view_scale(
    std::uint64_t master_seed, const Repository& repo, double weibull_shape,
    double weibull_scale, const PricingCatalog& pricing, const DecayModel& decay,
    double target_fraction, double tol_points = 1.0) {
  if (repo.empty()) throw std::invalid_argument("calibrate_view_scale: empty repository");
  if (target_fraction < 0.0 || target_fraction > 1.0)
    throw std::invalid_argument("calibrate_view_scale: target fraction in [0,1]");
  std::vector<double> draws(repo.size());
  for (std::size_t i = 0; i < repo.size(); ++i) {
    auto gen = rng::make_stream(master_seed, rng::StreamTag::kViews, repo[i].id);
    std::weibull_distribution<double> dist(weibull_shape, weibull_scale);
    draws[i] = dist(gen);
  }
  std::vector<double> crit = detail_calib::critical_views(repo, pricing, decay);
  const auto n = static_cast<double>(repo.size());
  auto fav_count = [&](double scale) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < repo.size(); ++i)
      if (std::round(scale * draws[i]) > crit[i]) ++count;
    return count;
  };
  const auto target = static_cast<std::size_t>(std::llround(target_fraction * n));

  CalibrationResult result;
  double hi = 1.0;
  int iter = 0;
  while (fav_count(hi) < target) {
    hi *= 2.0;
    if (++iter > 1100)
      throw CalibrationError("calibrate_view_scale: target fraction unreachable");
  }
  double lo = 0.0;
  for (int step = 0; step < 200 && hi - lo > 1e-12 * hi; ++step, ++iter) {
    double mid = 0.5 * (lo + hi);
    if (fav_count(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  result.view_scale = hi;
  result.achieved_fraction = static_cast<double>(fav_count(hi)) / n;
  result.iterations = iter;
  if (std::abs(result.achieved_fraction - target_fraction) * 100.0 > tol_points)
    throw CalibrationError("calibrate_view_scale: achieved fraction off target by > " +
                           std::to_string(tol_points) + " points");
  return result;
}

// --- repository serialization ---------------------------------------------
// videos file: one record per line, `id,views,gop_count`
// gops file:   one record per line, `video_id,j,size_mb,tau_s`
// Doubles are written with 17 significant digits so load() round-trips
// bit-exactly.

namespace detail_io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail_io

inline void save_repository(const Repository& repo, const std::string& videos_path,
                            const std::string& gops_path) {
  std::ofstream videos(videos_path);
  if (!videos) throw std::runtime_error("save_repository: cannot write " + videos_path);
  std::ofstream gops(gops_path);
  if (!gops) throw std::runtime_error("save_repository: cannot write " + gops_path);
  for (const Video& v : repo) {
    videos << v.id << ',' << detail_io::format_double(v.views) << ',' << v.gops.size()
           << '\n';
    for (const Gop& g : v.gops) {
      gops << v.id << ',' << g.index << ',' << detail_io::format_double(g.size_mb)
           << ',' << detail_io::format_double(g.transcode_time_s) << '\n';
    }
  }
  if (!videos.good() || !gops.good())
    throw std::runtime_error("save_repository: write failed");
}

inline Repository load_repository(const std::string& videos_path,
                                  const std::string& gops_path) {
  std::ifstream videos(videos_path);
  if (!videos) throw std::runtime_error("load_repository: cannot open " + videos_path);
  std::ifstream gops(gops_path);
  if (!gops) throw std::runtime_error("load_repository: cannot open " + gops_path);

  Repository repo;
  std::string line;
  std::vector<std::size_t> expected_counts;
  while (std::getline(videos, line)) {
    if (line.empty()) continue;
    auto f = detail_io::split_csv(line);
    if (f.size() != 3) throw ConfigError("load_repository: bad video record: " + line);
    Video v;
    v.id = std::stoull(f[0]);
    v.views = std::stod(f[1]);
    if (v.views < 0.0) throw ConfigError("load_repository: negative views");
    expected_counts.push_back(std::stoull(f[2]));
    repo.push_back(std::move(v));
  }
  std::size_t vi = 0;
  while (std::getline(gops, line)) {
    if (line.empty()) continue;
    auto f = detail_io::split_csv(line);
    if (f.size() != 4) throw ConfigError("load_repository: bad gop record: " + line);
    std::uint64_t video_id = std::stoull(f[0]);
    while (vi < repo.size() && repo[vi].id != video_id) ++vi;
    if (vi == repo.size())
      throw ConfigError("load_repository: gop references unknown video " + f[0]);
    Gop g;
    g.index = static_cast<std::uint32_t>(std::stoul(f[1]));
    g.size_mb = std::stod(f[2]);
    g.transcode_time_s = std::stod(f[3]);
    if (g.index != repo[vi].gops.size() + 1)
      throw ConfigError("load_repository: gop indices must be 1-based and contiguous");
    if (g.size_mb <= 0.0 || g.transcode_time_s <= 0.0)
      throw ConfigError("load_repository: non-positive gop size or time");
    repo[vi].gops.push_back(g);
  }
  for (std::size_t i = 0; i < repo.size(); ++i) {
    if (repo[i].gops.size() != expected_counts[i])
      throw ConfigError("load_repository: gop_count mismatch for video " +
                        std::to_string(repo[i].id));
    if (repo[i].gops.empty())
      throw ConfigError("load_repository: video without gops");
  }
  return repo;
}

}  // namespace vodsim::workload
