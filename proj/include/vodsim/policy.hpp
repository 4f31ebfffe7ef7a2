#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vodsim/clustering.hpp"
#include "vodsim/costmodel.hpp"
#include "vodsim/parallel.hpp"
#include "vodsim/types.hpp"

// Placement planners: per video, decide STORE(tier) or TRANSCODE per GOP
// under each of the five strategies and price the plan.

namespace vodsim::policy {

enum class Action : std::uint8_t { kStore, kTranscode };

struct GopDecision {
  Action action = Action::kTranscode;
  int tier = 0;  // 1..4 when stored, 0 otherwise
};

struct CostBreakdown {
  double sc_tier[kNumTiers] = {0.0, 0.0, 0.0, 0.0};
  double sc_stored_total = 0.0;  // SC_1 + SC_2 + SC_3 + SC_4
  double tc_remaining = 0.0;     // transcoding of everything not stored
  double total = 0.0;            // sc_stored_total + tc_remaining

  // Fixed summation order so the invariant re-adds bit-exactly.
  void finalize() {
    sc_stored_total = ((sc_tier[0] + sc_tier[1]) + sc_tier[2]) + sc_tier[3];
    total = sc_stored_total + tc_remaining;
  }
};

struct PlacementPlan {
  std::uint64_t video_id = 0;
  std::vector<GopDecision> decisions;  // aligned with Video::gops
  std::optional<std::uint32_t> threshold_index;  // G_threshold, if any
  CostBreakdown cost;
};

// Last GOP of the maximal leading prefix whose storage/transcoding ratio
// stays <= 1; nullopt when already the first GOP favors transcoding.
// Strict prefix semantics: an isolated cheap GOP after the first
// violation is still transcoded.
inline std::optional<std::uint32_t> find_threshold(const Video& video,
                                                   const PricingCatalog& pricing,
                                                   const DecayModel& decay) {
  std::uint32_t last_ok = 0;
  for (const Gop& g : video.gops) {
    if (cost::gop_cost(g, video.views, pricing, decay).ratio > 1.0) break;
    last_ok = g.index;
  }
  if (last_ok == 0) return std::nullopt;
  return last_ok;
}

// Every GOP to S3 Standard; cost is independent of views.
inline PlacementPlan plan_full_store(const Video& video, const PricingCatalog& pricing) {
  PlacementPlan plan;
  plan.video_id = video.id;
  plan.decisions.assign(video.gops.size(), GopDecision{Action::kStore, 1});
  if (!video.gops.empty())
    plan.threshold_index = static_cast<std::uint32_t>(video.gops.size());
  double price = cost::effective_storage_price(pricing, StorageTier::kStandard);
  for (const Gop& g : video.gops)
    plan.cost.sc_tier[0] += cost::gop_storage_cost(g.size_mb, price);
  plan.cost.finalize();
  return plan;
}

// Every GOP deleted and re-transcoded per estimated view.
inline PlacementPlan plan_full_transcode(const Video& video,
                                         const PricingCatalog& pricing,
                                         const DecayModel& decay) {
  PlacementPlan plan;
  plan.video_id = video.id;
  plan.decisions.assign(video.gops.size(), GopDecision{Action::kTranscode, 0});
  for (const Gop& g : video.gops) {
    double xi = cost::gop_views(video.views, g.index, decay);
    plan.cost.tc_remaining +=
        cost::gop_transcode_cost(xi, g.transcode_time_s, pricing.transcode_per_hour);
  }
  plan.cost.finalize();
  return plan;
}

// Whole-video decision by the video-level ratio; ties store.
inline PlacementPlan plan_store_or_transcode(const Video& video,
                                             const PricingCatalog& pricing,
                                             const DecayModel& decay) {
  return cost::video_ratio(video, pricing, decay) <= 1.0
             ? plan_full_store(video, pricing)
             : plan_full_transcode(video, pricing, decay);
}

// Threshold prefix to S3 Standard, remainder transcoded on demand.
inline PlacementPlan plan_partial_store(const Video& video,
                                        const PricingCatalog& pricing,
                                        const DecayModel& decay) {
  PlacementPlan plan;
  plan.video_id = video.id;
  plan.threshold_index = find_threshold(video, pricing, decay);
  std::uint32_t threshold = plan.threshold_index.value_or(0);
  plan.decisions.resize(video.gops.size());
  double price = cost::effective_storage_price(pricing, StorageTier::kStandard);
  for (const Gop& g : video.gops) {
    if (g.index <= threshold) {
      plan.decisions[g.index - 1] = {Action::kStore, 1};
      plan.cost.sc_tier[0] += cost::gop_storage_cost(g.size_mb, price);
    } else {
      plan.decisions[g.index - 1] = {Action::kTranscode, 0};
      double xi = cost::gop_views(video.views, g.index, decay);
      plan.cost.tc_remaining +=
          cost::gop_transcode_cost(xi, g.transcode_time_s, pricing.transcode_per_hour);
    }
  }
  plan.cost.finalize();
  return plan;
}

// The clustering method: threshold scan, then K-means over the stored
// GOPs' estimated views, each cluster priced at its mapped tier.
inline PlacementPlan plan_clustered(const Video& video, const PricingCatalog& pricing,
                                    const DecayModel& decay,
                                    const cluster::KMeansConfig& kmeans_cfg) {
  PlacementPlan plan;
  plan.video_id = video.id;
  plan.threshold_index = find_threshold(video, pricing, decay);
  if (!plan.threshold_index) return plan_full_transcode(video, pricing, decay);

  std::uint32_t threshold = *plan.threshold_index;
  std::vector<double> stored_views(threshold);
  for (std::uint32_t j = 1; j <= threshold; ++j)
    stored_views[j - 1] = cost::gop_views(video.views, j, decay);

  cluster::KMeansConfig cfg = kmeans_cfg;
  cfg.seed = rng::derive_seed(kmeans_cfg.seed, rng::StreamTag::kClustering, video.id);
  cluster::ClusterResult clusters = cluster::kmeans_1d(stored_views, cfg);
  std::vector<int> tier_of_cluster = cluster::map_clusters_to_tiers(clusters);

  plan.decisions.resize(video.gops.size());
  for (const Gop& g : video.gops) {
    if (g.index <= threshold) {
      int tier = tier_of_cluster[clusters.assignments[g.index - 1]];
      plan.decisions[g.index - 1] = {Action::kStore, tier};
      double price = cost::effective_storage_price(pricing, tier_from_int(tier));
      plan.cost.sc_tier[tier - 1] += cost::gop_storage_cost(g.size_mb, price);
    } else {
      plan.decisions[g.index - 1] = {Action::kTranscode, 0};
      double xi = cost::gop_views(video.views, g.index, decay);
      plan.cost.tc_remaining +=
          cost::gop_transcode_cost(xi, g.transcode_time_s, pricing.transcode_per_hour);
    }
  }
  plan.cost.finalize();
  return plan;
}

using PlanFn = std::function<PlacementPlan(const Video&)>;

// Total monthly cost of planning every video. Per-video totals land in
// slots and are reduced in video order, so the result is identical for
// any thread count.
inline double repo_total_cost(const Repository& repo, const PlanFn& plan_fn,
                              int threads = 1) {
  std::vector<double> totals(repo.size(), 0.0);
  detail::parallel_for(repo.size(), threads,
                       [&](std::size_t i) { totals[i] = plan_fn(repo[i]).cost.total; });
  double sum = 0.0;
  for (double t : totals) sum += t;
  return sum;
}

// CSV export, schema: video_id,j,decision,tier,sc,tc
// sc/tc are the charges the plan actually incurs for that GOP.
inline void export_plan_csv(std::ostream& os, const Video& video,
                            const PlacementPlan& plan, const PricingCatalog& pricing,
                            const DecayModel& decay, bool header = true) {
  if (plan.decisions.size() != video.gops.size())
    throw std::invalid_argument("export_plan_csv: plan does not match video");
  if (header) os << "video_id,j,decision,tier,sc,tc\n";
  char buf[64];
  for (const Gop& g : video.gops) {
    const GopDecision& d = plan.decisions[g.index - 1];
    double sc = 0.0, tc = 0.0;
    if (d.action == Action::kStore) {
      double price = cost::effective_storage_price(pricing, tier_from_int(d.tier));
      sc = cost::gop_storage_cost(g.size_mb, price);
    } else {
      double xi = cost::gop_views(video.views, g.index, decay);
      tc = cost::gop_transcode_cost(xi, g.transcode_time_s, pricing.transcode_per_hour);
    }
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g", sc, tc);
    os << video.id << ',' << g.index << ','
       << (d.action == Action::kStore ? "store" : "transcode") << ',' << d.tier << ','
       << buf << '\n';
  }
}

}  // namespace vodsim::policy
