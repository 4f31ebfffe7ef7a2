#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "vodsim/rng.hpp"
#include "vodsim/types.hpp"

// 1-D Lloyd's k-means over view counts, plus the deterministic
// cluster-to-storage-tier mapping.

namespace vodsim::cluster {

struct KMeansConfig {
  int k = 4;  // matches the number of storage tiers
  std::uint64_t seed = 12345;
  double tol = 1e-6;  // relative centroid movement
  int max_iter = 100;
  int restarts = 4;

  void validate() const {
    if (k < 1) throw ConfigError("KMeansConfig: k must be >= 1");
    if (tol <= 0.0) throw ConfigError("KMeansConfig: tol must be positive");
    if (max_iter < 1 || restarts < 1)
      throw ConfigError("KMeansConfig: max_iter and restarts must be >= 1");
  }
};

struct ClusterResult {
  std::vector<int> assignments;   // cluster index per input value
  std::vector<double> centroids;  // one per cluster
  int iterations = 0;
};

inline double wcss(std::span<const double> values, const ClusterResult& r) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - r.centroids[r.assignments[i]];
    sum += d * d;
  }
  return sum;
}

namespace detail {

// Nearest centroid; ties go to the lower cluster index.
inline int nearest(double v, const std::vector<double>& centroids) {
  int best = 0;
  double best_d = std::abs(v - centroids[0]);
  for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
    double d = std::abs(v - centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Boundaries at the k-1 widest gaps of the sorted values; centroids are
// the segment means. Order-independent and usually already the optimal
// basin on clumped data.
inline std::vector<double> widest_gaps_init(const std::vector<double>& sorted, int k) {
  const std::size_t n = sorted.size();
  std::vector<std::size_t> cuts;  // cut before index i
  std::vector<std::pair<double, std::size_t>> gaps;
  gaps.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) gaps.push_back({sorted[i] - sorted[i - 1], i});
  std::sort(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int c = 0; c < k - 1; ++c) cuts.push_back(gaps[c].second);
  cuts.push_back(0);
  cuts.push_back(n);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> centroids;
  centroids.reserve(k);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double sum = 0.0;
    for (std::size_t i = cuts[s]; i < cuts[s + 1]; ++i) sum += sorted[i];
    centroids.push_back(sum / static_cast<double>(cuts[s + 1] - cuts[s]));
  }
  return centroids;
}

// Centroids at evenly spaced quantiles of the distinct values.
inline std::vector<double> quantile_init(const std::vector<double>& distinct, int k) {
  std::vector<double> centroids;
  centroids.reserve(k);
  const std::size_t d = distinct.size();
  for (int c = 0; c < k; ++c) {
    std::size_t idx = static_cast<std::size_t>((2 * c + 1) * d / (2 * k));
    centroids.push_back(distinct[std::min(idx, d - 1)]);
  }
  return centroids;
}

inline std::vector<double> kmeanspp_init(std::span<const double> values, int k,
                                         std::mt19937_64& gen) {
  std::vector<double> centroids;
  centroids.reserve(k);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  centroids.push_back(values[pick(gen)]);
  std::vector<double> d2(values.size());
  while (static_cast<int>(centroids.size()) < k) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      double d = values[i] - centroids[0];
      double best = d * d;
      for (std::size_t c = 1; c < centroids.size(); ++c) {
        d = values[i] - centroids[c];
        best = std::min(best, d * d);
      }
      d2[i] = best;
    }
    double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    if (total <= 0.0) {
      // all remaining mass sits on existing centroids; cannot happen when
      // k <= distinct count, but keep the guard
      centroids.push_back(values[pick(gen)]);
      continue;
    }
    std::discrete_distribution<std::size_t> choose(d2.begin(), d2.end());
    centroids.push_back(values[choose(gen)]);
  }
  return centroids;
}

struct LloydOutcome {
  std::vector<double> centroids;
  std::vector<int> assignments;
  int iterations = 0;
  double wcss = 0.0;
};

// Contiguous-partition view of the sorted values with prefix sums, used
// by the boundary refinement between Lloyd passes.
struct SortedView {
  std::vector<std::size_t> order;  // sorted position -> original index
  std::vector<double> sorted;
  std::vector<double> s1, s2;  // prefix sums of values and squares

  explicit SortedView(std::span<const double> values) {
    const std::size_t n = values.size();
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    sorted.resize(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = values[order[i]];
    s1.assign(n + 1, 0.0);
    s2.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      s1[i + 1] = s1[i] + sorted[i];
      s2[i + 1] = s2[i] + sorted[i] * sorted[i];
    }
  }

  double segment_cost(std::size_t lo, std::size_t hi) const {  // [lo, hi)
    double cnt = static_cast<double>(hi - lo);
    double sum = s1[hi] - s1[lo];
    return (s2[hi] - s2[lo]) - sum * sum / cnt;
  }
};

// In one dimension a converged Lloyd solution is contiguous in sorted
// order; sliding single points across adjacent boundaries while the WCSS
// strictly decreases escapes most of Lloyd's local optima. Returns true
// if any move was applied.
inline bool refine_boundaries(const SortedView& view, std::vector<std::size_t>& cuts) {
  bool any = false;
  bool improved = true;
  int guard = 0;
  const int max_moves = 64 * static_cast<int>(view.sorted.size()) + 64;
  while (improved && guard++ < max_moves) {
    improved = false;
    for (std::size_t b = 1; b + 1 < cuts.size(); ++b) {
      std::size_t lo = cuts[b - 1], mid = cuts[b], hi = cuts[b + 1];
      double current = view.segment_cost(lo, mid) + view.segment_cost(mid, hi);
      // pull the first right point into the left segment
      if (hi - mid >= 2) {
        double moved = view.segment_cost(lo, mid + 1) + view.segment_cost(mid + 1, hi);
        if (moved < current) {
          ++cuts[b];
          improved = any = true;
          continue;
        }
      }
      // push the last left point into the right segment
      if (mid - lo >= 2) {
        double moved = view.segment_cost(lo, mid - 1) + view.segment_cost(mid - 1, hi);
        if (moved < current) {
          --cuts[b];
          improved = any = true;
        }
      }
    }
  }
  return any;
}

// Segment boundaries of a converged Lloyd assignment in sorted order;
// empty when the assignment is not a clean k-segment partition.
inline std::vector<std::size_t> cuts_from_assignment(const SortedView& view,
                                                     const std::vector<int>& assignments,
                                                     int k) {
  std::vector<std::size_t> cuts{0};
  for (std::size_t i = 1; i < view.order.size(); ++i)
    if (assignments[view.order[i]] != assignments[view.order[i - 1]]) cuts.push_back(i);
  cuts.push_back(view.order.size());
  if (static_cast<int>(cuts.size()) != k + 1) return {};
  return cuts;
}

inline LloydOutcome lloyd(std::span<const double> values,
                          std::vector<double> centroids, double tol,
                          int max_iter) {
  const int k = static_cast<int>(centroids.size());
  const std::size_t n = values.size();
  std::vector<int> assign(n, 0);
  std::vector<double> sums(k);
  std::vector<int> counts(k);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) assign[i] = nearest(values[i], centroids);
    // reseed empty clusters at the point currently farthest from its centroid
    for (int pass = 0; pass < k; ++pass) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];
      int empty = -1;
      for (int c = 0; c < k; ++c)
        if (counts[c] == 0) { empty = c; break; }
      if (empty < 0) break;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = std::abs(values[i] - centroids[assign[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centroids[empty] = values[far];
      for (std::size_t i = 0; i < n; ++i) assign[i] = nearest(values[i], centroids);
    }
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[assign[i]] += values[i];
      ++counts[assign[i]];
    }
    double max_rel_move = 0.0;
    for (int c = 0; c < k; ++c) {
      double updated = counts[c] > 0 ? sums[c] / counts[c] : centroids[c];
      double scale = std::max({std::abs(centroids[c]), std::abs(updated),
                               std::numeric_limits<double>::min()});
      max_rel_move = std::max(max_rel_move, std::abs(updated - centroids[c]) / scale);
      centroids[c] = updated;
    }
    if (max_rel_move < tol) {
      ++iter;
      break;
    }
  }
  LloydOutcome out;
  out.assignments.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.assignments[i] = nearest(values[i], centroids);
  out.centroids = std::move(centroids);
  out.iterations = iter;
  for (std::size_t i = 0; i < n; ++i) {
    double d = values[i] - out.centroids[out.assignments[i]];
    out.wcss += d * d;
  }
  return out;
}

}  // namespace detail

// Lloyd's iteration, best of several starts by WCSS: two deterministic
// order-independent seedings (widest gaps, quantiles) plus cfg.restarts
// k-means++ runs. k collapses to the number of distinct values, so
// degenerate inputs still cluster. Deterministic given cfg.seed; WCSS
// ties keep the earliest start, so the order-independent seedings win
// them.
inline ClusterResult kmeans_1d(std::span<const double> values,
                               const KMeansConfig& cfg) {
  cfg.validate();
  if (values.empty()) throw std::invalid_argument("kmeans_1d: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const int k = std::min<int>(cfg.k, static_cast<int>(distinct.size()));

  std::vector<std::vector<double>> inits;
  inits.push_back(detail::widest_gaps_init(sorted, k));
  inits.push_back(detail::quantile_init(distinct, k));
  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 gen(rng::splitmix64(cfg.seed + static_cast<std::uint64_t>(r)));
    inits.push_back(detail::kmeanspp_init(values, k, gen));
  }

  const detail::SortedView view(values);
  detail::LloydOutcome best;
  bool have = false;
  for (auto& init : inits) {
    auto run = detail::lloyd(values, std::move(init), cfg.tol, cfg.max_iter);
    // alternate boundary refinement and Lloyd polish while WCSS drops
    for (int round = 0; round < 8; ++round) {
      auto cuts = detail::cuts_from_assignment(view, run.assignments, k);
      if (cuts.empty() || !detail::refine_boundaries(view, cuts)) break;
      std::vector<double> centroids;
      centroids.reserve(k);
      for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
        centroids.push_back((view.s1[cuts[s + 1]] - view.s1[cuts[s]]) /
                            static_cast<double>(cuts[s + 1] - cuts[s]));
      auto polished = detail::lloyd(values, std::move(centroids), cfg.tol, cfg.max_iter);
      if (polished.wcss < run.wcss)
        run = std::move(polished);
      else
        break;
    }
    if (!have || run.wcss < best.wcss) {
      best = std::move(run);
      have = true;
    }
  }
  ClusterResult out;
  out.assignments = std::move(best.assignments);
  out.centroids = std::move(best.centroids);
  out.iterations = best.iterations;
  return out;
}

// Tier (1-based) per cluster: highest centroid -> tier 1 (S3 Standard),
// descending to Glacier. Duplicate centroids rank by cardinality
// descending, then by cluster index.
inline std::vector<int> map_clusters_to_tiers(const ClusterResult& result) {
  const int k = static_cast<int>(result.centroids.size());
  if (k == 0) throw std::invalid_argument("map_clusters_to_tiers: no clusters");
  if (k > kNumTiers)
    throw std::invalid_argument("map_clusters_to_tiers: more clusters than tiers");
  std::vector<int> cardinality(k, 0);
  for (int a : result.assignments) {
    if (a < 0 || a >= k)
      throw std::invalid_argument("map_clusters_to_tiers: assignment out of range");
    ++cardinality[a];
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (result.centroids[a] != result.centroids[b])
      return result.centroids[a] > result.centroids[b];
    if (cardinality[a] != cardinality[b]) return cardinality[a] > cardinality[b];
    return a < b;
  });
  std::vector<int> tier_of_cluster(k, 0);
  for (int rank = 0; rank < k; ++rank) tier_of_cluster[order[rank]] = rank + 1;
  return tier_of_cluster;
}

}  // namespace vodsim::cluster
