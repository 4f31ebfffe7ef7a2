#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "vodsim/types.hpp"

// Monthly cost model: per-GOP view estimation, storage cost, transcoding
// cost, and the store/transcode ratio at GOP and video level. All
// functions are pure.

namespace vodsim::cost {

inline constexpr double kKbPerMb = 1024.0;  // 2^10
inline constexpr double kMbPerGb = 1024.0;  // 2^10
inline constexpr double kSecondsPerHour = 3600.0;

// Ratio sentinel for a GOP that costs something to store but nothing to
// transcode (zero estimated views): always favors transcoding.
inline constexpr double kRatioInfinite = std::numeric_limits<double>::infinity();

// Estimated monthly views of the j-th GOP: gamma / j^alpha.
// Non-increasing in j, so later GOPs always look colder.
inline double gop_views(double gamma, std::uint32_t j, const DecayModel& decay) {
  if (j == 0) throw std::invalid_argument("gop_views: GOP index is 1-based");
  if (gamma < 0.0) throw std::invalid_argument("gop_views: negative views");
  return gamma / std::pow(static_cast<double>(j), decay.alpha);
}

// Storage price actually paid for a tier. The CDN surcharge applies to
// the replicated tiers (1-3); Glacier is never fronted by CDN.
inline double effective_storage_price(const PricingCatalog& p, StorageTier tier) {
  double price = p.tier_price(tier);
  if (p.cdn_enabled && tier != StorageTier::kGlacier)
    price += p.cdn_per_gb_month * p.cdn_replication;
  return price;
}

// Monthly storage cost of one GOP: size * price / 2^10 (MB -> GB).
inline double gop_storage_cost(double size_mb, double price_per_gb_month) {
  if (size_mb < 0.0 || price_per_gb_month < 0.0)
    throw std::invalid_argument("gop_storage_cost: negative input");
  return size_mb * price_per_gb_month / kMbPerGb;
}

inline double video_storage_cost(const Video& video, double price_per_gb_month) {
  double sum = 0.0;
  for (const Gop& g : video.gops) sum += gop_storage_cost(g.size_mb, price_per_gb_month);
  return sum;
}

// Monthly transcoding cost of one GOP serving est_views requests:
// views * tau * price / 3600 (seconds -> VM-hours).
inline double gop_transcode_cost(double est_views, double tau_s,
                                 double price_per_hour) {
  if (est_views < 0.0 || tau_s < 0.0 || price_per_hour < 0.0)
    throw std::invalid_argument("gop_transcode_cost: negative input");
  return est_views * tau_s * price_per_hour / kSecondsPerHour;
}

inline double video_transcode_cost(const Video& video, const DecayModel& decay,
                                   double price_per_hour) {
  double sum = 0.0;
  for (const Gop& g : video.gops) {
    double xi = gop_views(video.views, g.index, decay);
    sum += gop_transcode_cost(xi, g.transcode_time_s, price_per_hour);
  }
  return sum;
}

// Store/transcode ratio with the tie rules of the decision section:
// both costs zero -> 1 (store); only transcoding free -> +inf (delete).
inline double cost_ratio(double storage, double transcode) {
  if (storage < 0.0 || transcode < 0.0)
    throw std::invalid_argument("cost_ratio: negative cost");
  if (transcode == 0.0) return storage == 0.0 ? 1.0 : kRatioInfinite;
  return storage / transcode;
}

struct GopCost {
  double storage = 0.0;    // SC, at the effective tier-1 price
  double transcode = 0.0;  // TC, at the estimated views
  double ratio = 1.0;      // SC/TC with sentinel rules
};

// Cost pair of one GOP under the general (tier-1) storage price, the
// quantity the threshold scan compares.
inline GopCost gop_cost(const Gop& g, double video_views,
                        const PricingCatalog& pricing, const DecayModel& decay) {
  GopCost c;
  double price = effective_storage_price(pricing, StorageTier::kStandard);
  c.storage = gop_storage_cost(g.size_mb, price);
  double xi = gop_views(video_views, g.index, decay);
  c.transcode = gop_transcode_cost(xi, g.transcode_time_s, pricing.transcode_per_hour);
  c.ratio = cost_ratio(c.storage, c.transcode);
  return c;
}

inline double gop_ratio(const GopCost& c) { return cost_ratio(c.storage, c.transcode); }

// Video-level ratio: sum of storage costs over sum of transcoding costs
// (not the mean of per-GOP ratios).
inline double video_ratio(const Video& video, const PricingCatalog& pricing,
                          const DecayModel& decay) {
  double price = effective_storage_price(pricing, StorageTier::kStandard);
  double sc = video_storage_cost(video, price);
  double tc = video_transcode_cost(video, decay, pricing.transcode_per_hour);
  return cost_ratio(sc, tc);
}

// Populates Gop::est_views from the parent video's monthly views.
inline void fill_estimated_views(Video& video, const DecayModel& decay) {
  for (Gop& g : video.gops) g.est_views = gop_views(video.views, g.index, decay);
}

}  // namespace vodsim::cost
