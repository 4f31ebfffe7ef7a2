#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "vodsim/config.hpp"
#include "vodsim/policy.hpp"
#include "vodsim/workload.hpp"

// Experiment harness: the FAV sweep, the CDN sweep, and the view-growth
// sweep, emitting plot-ready CSV plus a summary report.

namespace vodsim::experiments {

inline constexpr const char* kPolicyNames[] = {
    "full_store", "full_transcode", "store_or_transcode", "partial_store", "clustered",
};

struct SweepRow {
  std::string scenario;  // fav | cdn | views
  double x = 0.0;        // FAV % or growth %
  std::string policy;
  std::uint64_t seed = 0;
  double total_usd = 0.0;
  double normalized = 0.0;  // total / full_store total of the same point
};

struct PolicyTotals {
  double full_store = 0.0;
  double full_transcode = 0.0;
  double store_or_transcode = 0.0;
  double partial_store = 0.0;
  double clustered = 0.0;
};

inline PolicyTotals evaluate_policies(const Repository& repo,
                                      const PricingCatalog& pricing,
                                      const DecayModel& decay,
                                      const cluster::KMeansConfig& kmeans,
                                      int threads = 1) {
  PolicyTotals t;
  t.full_store = policy::repo_total_cost(
      repo, [&](const Video& v) { return policy::plan_full_store(v, pricing); }, threads);
  t.full_transcode = policy::repo_total_cost(
      repo, [&](const Video& v) { return policy::plan_full_transcode(v, pricing, decay); },
      threads);
  t.store_or_transcode = policy::repo_total_cost(
      repo,
      [&](const Video& v) { return policy::plan_store_or_transcode(v, pricing, decay); },
      threads);
  t.partial_store = policy::repo_total_cost(
      repo, [&](const Video& v) { return policy::plan_partial_store(v, pricing, decay); },
      threads);
  t.clustered = policy::repo_total_cost(
      repo,
      [&](const Video& v) { return policy::plan_clustered(v, pricing, decay, kmeans); },
      threads);
  return t;
}

// Percentage reduction of b relative to a: (a - b) / a * 100.
inline double reduction_pct(double a, double b) {
  if (a == 0.0) return 0.0;
  return (a - b) / a * 100.0;
}

namespace detail_exp {

inline void append_point(std::vector<SweepRow>& rows, const std::string& scenario,
                         double x, std::uint64_t seed, const PolicyTotals& t) {
  const double fs = t.full_store;
  auto norm = [fs](double v) { return fs > 0.0 ? v / fs : 0.0; };
  rows.push_back({scenario, x, "full_store", seed, t.full_store, norm(t.full_store)});
  rows.push_back({scenario, x, "full_transcode", seed, t.full_transcode, norm(t.full_transcode)});
  rows.push_back({scenario, x, "store_or_transcode", seed, t.store_or_transcode,
                  norm(t.store_or_transcode)});
  rows.push_back({scenario, x, "partial_store", seed, t.partial_store, norm(t.partial_store)});
  rows.push_back({scenario, x, "clustered", seed, t.clustered, norm(t.clustered)});
}

// One calibrated view scale per seed, anchored at cfg.anchor_shape's
// FAV target. The other shapes reuse it; their FAV fractions then land
// on the published table because the per-video Weibull draws share the
// same underlying uniforms across shapes.
inline workload::CalibrationResult calibrate_anchor(const config::SimConfig& cfg,
                                                    std::uint64_t seed,
                                                    const Repository& repo) {
  PricingCatalog base = cfg.pricing;
  base.cdn_enabled = false;  // FAV is defined against plain storage prices
  return workload::calibrate_view_scale(
      seed, repo, cfg.anchor_shape, cfg.weibull_scale, base, cfg.decay,
      cfg.fav_target_for_shape(cfg.anchor_shape) / 100.0, cfg.calibration_tol_pct);
}

inline std::vector<SweepRow> run_access_sweep(const config::SimConfig& cfg,
                                              bool cdn_enabled, const char* label,
                                              std::vector<std::string>* failures) {
  cfg.validate();
  PricingCatalog eval = cfg.pricing;
  eval.cdn_enabled = cdn_enabled;
  std::vector<SweepRow> rows;
  for (std::uint64_t seed : cfg.seeds) {
    Repository repo = workload::synthesize_repository(seed, cfg.n_videos, cfg.gop_stats,
                                                      cfg.time_model, cfg.threads);
    workload::CalibrationResult calib;
    try {
      calib = calibrate_anchor(cfg, seed, repo);
    } catch (const CalibrationError& e) {
      std::string msg = std::string(label) + " sweep, seed " + std::to_string(seed) +
                        ": " + e.what();
      std::cerr << "calibration failure: " << msg << " (rows skipped)\n";
      if (failures) failures->push_back(msg);
      continue;
    }
    for (std::size_t i = 0; i < cfg.weibull_shapes.size(); ++i) {
      ViewModel vm{cfg.weibull_shapes[i], cfg.weibull_scale, calib.view_scale};
      workload::assign_views(seed, repo, vm, cfg.threads);
      PolicyTotals totals = evaluate_policies(repo, eval, cfg.decay, cfg.kmeans, cfg.threads);
      append_point(rows, label, cfg.fav_targets_pct[i], seed, totals);
    }
  }
  return rows;
}

}  // namespace detail_exp

// Fig. 5a: vary the frequently-accessed share via the Weibull shape.
inline std::vector<SweepRow> run_fav_sweep(const config::SimConfig& cfg,
                                           std::vector<std::string>* failures = nullptr) {
  return detail_exp::run_access_sweep(cfg, false, "fav", failures);
}

// Fig. 5b: the same sweep with the CDN surcharge on replicated tiers.
inline std::vector<SweepRow> run_cdn_sweep(const config::SimConfig& cfg,
                                           std::vector<std::string>* failures = nullptr) {
  return detail_exp::run_access_sweep(cfg, true, "cdn", failures);
}

// Fig. 6: fix the anchor-shape repository and scale everyone's views by
// the growth multiplier per step.
inline std::vector<SweepRow> run_views_sweep(const config::SimConfig& cfg,
                                             std::vector<std::string>* failures = nullptr) {
  cfg.validate();
  PricingCatalog eval = cfg.pricing;
  eval.cdn_enabled = false;
  std::vector<SweepRow> rows;
  for (std::uint64_t seed : cfg.seeds) {
    Repository repo = workload::synthesize_repository(seed, cfg.n_videos, cfg.gop_stats,
                                                      cfg.time_model, cfg.threads);
    workload::CalibrationResult calib;
    try {
      calib = detail_exp::calibrate_anchor(cfg, seed, repo);
    } catch (const CalibrationError& e) {
      std::string msg = "views sweep, seed " + std::to_string(seed) + ": " + e.what();
      std::cerr << "calibration failure: " << msg << " (rows skipped)\n";
      if (failures) failures->push_back(msg);
      continue;
    }
    ViewModel vm{cfg.anchor_shape, cfg.weibull_scale, calib.view_scale};
    workload::assign_views(seed, repo, vm, cfg.threads);
    std::vector<double> base_views(repo.size());
    for (std::size_t i = 0; i < repo.size(); ++i) base_views[i] = repo[i].views;
    for (double growth : cfg.view_growth_steps_pct) {
      double mult = cfg.growth_multiplier(growth);
      for (std::size_t i = 0; i < repo.size(); ++i) repo[i].views = base_views[i] * mult;
      PolicyTotals totals = evaluate_policies(repo, eval, cfg.decay, cfg.kmeans, cfg.threads);
      detail_exp::append_point(rows, "views", growth, seed, totals);
    }
  }
  return rows;
}

// --- reporting -------------------------------------------------------------

namespace detail_exp {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

struct Aggregate {
  std::map<std::string, std::vector<double>> by_policy;  // totals across seeds
};

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail_exp

// Writes sweep.csv (frozen schema: scenario,x,policy,seed,total_usd,
// normalized) and summary.txt (per-point means and the reductions of the
// clustering method against partial store and full store). Rows are
// sorted before writing, so equal inputs give byte-equal files. When cfg
// is given, the applied view-growth multipliers are documented.
inline void emit_report(std::vector<SweepRow> rows, const std::string& out_dir,
                        const config::SimConfig* cfg = nullptr) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.scenario, a.x, a.policy, a.seed) <
           std::tie(b.scenario, b.x, b.policy, b.seed);
  });

  const std::string csv_path = out_dir + "/sweep.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("emit_report: cannot write " + csv_path);
  csv << "scenario,x,policy,seed,total_usd,normalized\n";
  for (const SweepRow& r : rows) {
    csv << r.scenario << ',' << detail_exp::fmt("%g", r.x) << ',' << r.policy << ','
        << r.seed << ',' << detail_exp::fmt("%.2f", r.total_usd) << ','
        << detail_exp::fmt("%.6f", r.normalized) << '\n';
  }
  if (!csv.good()) throw std::runtime_error("emit_report: write failed: " + csv_path);

  const std::string summary_path = out_dir + "/summary.txt";
  std::ofstream out(summary_path);
  if (!out) throw std::runtime_error("emit_report: cannot write " + summary_path);

  std::map<std::pair<std::string, double>, detail_exp::Aggregate> points;
  for (const SweepRow& r : rows) points[{r.scenario, r.x}].by_policy[r.policy].push_back(r.total_usd);

  out << "monthly cloud cost per scenario point (mean +/- sample std across seeds)\n";
  for (const auto& [key, agg] : points) {
    out << "\n[" << key.first << "] x=" << detail_exp::fmt("%g", key.second) << "\n";
    for (const char* policy : kPolicyNames) {
      auto it = agg.by_policy.find(policy);
      if (it == agg.by_policy.end()) continue;
      out << "  " << policy << ": " << detail_exp::fmt("%.2f", detail_exp::mean(it->second))
          << " +/- " << detail_exp::fmt("%.2f", detail_exp::sample_std(it->second)) << "\n";
    }
    auto clustered = agg.by_policy.find("clustered");
    auto partial = agg.by_policy.find("partial_store");
    auto full = agg.by_policy.find("full_store");
    if (clustered != agg.by_policy.end() && partial != agg.by_policy.end()) {
      double red = reduction_pct(detail_exp::mean(partial->second),
                                 detail_exp::mean(clustered->second));
      out << "  reduction clustered vs partial_store: " << detail_exp::fmt("%.1f", red)
          << "%\n";
    }
    if (clustered != agg.by_policy.end() && full != agg.by_policy.end()) {
      double red = reduction_pct(detail_exp::mean(full->second),
                                 detail_exp::mean(clustered->second));
      out << "  reduction clustered vs full_store: " << detail_exp::fmt("%.1f", red)
          << "%\n";
    }
  }
  bool has_views = false;
  for (const SweepRow& r : rows)
    if (r.scenario == "views") has_views = true;
  if (has_views && cfg) {
    out << "\nview growth multipliers (growth g% compounds over "
        << detail_exp::fmt("%g", cfg->growth_horizon_months) << " months):\n";
    std::vector<double> steps;
    for (const SweepRow& r : rows)
      if (r.scenario == "views") steps.push_back(r.x);
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    for (double g : steps)
      out << "  +" << detail_exp::fmt("%g", g) << "% -> total views x "
          << detail_exp::fmt("%.3f", cfg->growth_multiplier(g)) << "\n";
  }
  if (!out.good()) throw std::runtime_error("emit_report: write failed: " + summary_path);
}

}  // namespace vodsim::experiments
