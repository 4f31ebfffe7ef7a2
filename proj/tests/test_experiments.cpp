#include "vodsim/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vodsim;
using experiments::SweepRow;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

config::SimConfig tiny_config() {
  config::SimConfig cfg;
  cfg.n_videos = 150;
  cfg.seeds = {5};
  cfg.weibull_shapes = {1.0, 2.4};
  cfg.fav_targets_pct = {20, 5};
  cfg.calibration_tol_pct = 2.0;
  return cfg;
}

bool rows_equal(const std::vector<SweepRow>& a, const std::vector<SweepRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].scenario != b[i].scenario || a[i].x != b[i].x ||
        a[i].policy != b[i].policy || a[i].seed != b[i].seed ||
        a[i].total_usd != b[i].total_usd || a[i].normalized != b[i].normalized)
      return false;
  }
  return true;
}

double total_of(const std::vector<SweepRow>& rows, const std::string& scenario, double x,
                const std::string& policy, std::uint64_t seed) {
  for (const SweepRow& r : rows)
    if (r.scenario == scenario && r.x == x && r.policy == policy && r.seed == seed)
      return r.total_usd;
  throw std::runtime_error("row not found: " + scenario + " " + policy);
}

TEST(Config, DefaultsAreValid) {
  config::SimConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.n_videos, 2000);
  EXPECT_EQ(cfg.paper_scale_n_videos, 50000);
  EXPECT_DOUBLE_EQ(cfg.pricing.storage_tier1, 0.023);
  EXPECT_DOUBLE_EQ(cfg.pricing.storage_tier4, 0.001);
  EXPECT_DOUBLE_EQ(cfg.pricing.transcode_per_hour, 0.026);
  EXPECT_DOUBLE_EQ(cfg.pricing.cdn_per_gb_month, 0.085);
  EXPECT_DOUBLE_EQ(cfg.gop_stats.size_mean_kb, 655.08);
  EXPECT_EQ(cfg.gop_stats.count_max, 2018);
  EXPECT_DOUBLE_EQ(cfg.decay.alpha, 0.1);
  EXPECT_EQ(cfg.kmeans.k, 4);
  EXPECT_DOUBLE_EQ(cfg.fav_target_for_shape(1.8), 10.0);
}

TEST(Config, ParsesOverridesCommentsAndLists) {
  std::stringstream in(
      "# comment line\n"
      "n_videos = 42   # trailing comment\n"
      "\n"
      "seeds = 9, 8, 7\n"
      "weibull_shapes = 0.5, 1.5\n"
      "fav_targets_pct = 28, 12\n"
      "anchor_shape = 1.5\n"
      "cdn_enabled = true\n"
      "transcode_intercept_s = 0.125\n");
  auto cfg = config::parse_config(in);
  EXPECT_EQ(cfg.n_videos, 42);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{9, 8, 7}));
  EXPECT_EQ(cfg.weibull_shapes, (std::vector<double>{0.5, 1.5}));
  EXPECT_TRUE(cfg.pricing.cdn_enabled);
  EXPECT_DOUBLE_EQ(cfg.time_model.intercept_s, 0.125);
  EXPECT_DOUBLE_EQ(cfg.fav_target_for_shape(1.5), 12.0);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  std::stringstream unknown("no_such_knob = 3\n");
  EXPECT_THROW(config::parse_config(unknown), ConfigError);
  std::stringstream bad_number("n_videos = many\n");
  EXPECT_THROW(config::parse_config(bad_number), ConfigError);
  std::stringstream no_eq("n_videos 42\n");
  EXPECT_THROW(config::parse_config(no_eq), ConfigError);
  std::stringstream misaligned("weibull_shapes = 1.0\n");  // targets stay 6-long
  EXPECT_THROW(config::parse_config(misaligned), ConfigError);
  std::stringstream bad_anchor("anchor_shape = 0.9\n");
  EXPECT_THROW(config::parse_config(bad_anchor), ConfigError);
}

TEST(Config, GrowthMultiplierCompounds) {
  config::SimConfig cfg;
  EXPECT_NEAR(cfg.growth_multiplier(5.0), std::pow(1.05, 18.0), 1e-12);
  EXPECT_NEAR(cfg.growth_multiplier(5.0) / cfg.growth_multiplier(1.0), 2.0119, 5e-4);
}

TEST(Reduction, MatchesHandArithmetic) {
  EXPECT_NEAR(experiments::reduction_pct(533.0, 330.0), 38.0863, 1e-3);
  EXPECT_EQ(experiments::reduction_pct(0.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(experiments::reduction_pct(100.0, 80.0), 20.0);
}

TEST(EmitReport, EmptyRowsGiveHeaderOnlyCsv) {
  std::string dir = testing::TempDir() + "emit_empty";
  std::filesystem::create_directories(dir);
  experiments::emit_report({}, dir);
  EXPECT_EQ(slurp(dir + "/sweep.csv"), "scenario,x,policy,seed,total_usd,normalized\n");
  EXPECT_TRUE(std::filesystem::exists(dir + "/summary.txt"));
}

TEST(EmitReport, OneRowRoundTrips) {
  std::string dir = testing::TempDir() + "emit_one";
  std::filesystem::create_directories(dir);
  std::vector<SweepRow> rows{{"fav", 30.0, "clustered", 3, 12.345678, 0.4321}};
  experiments::emit_report(rows, dir);
  std::ifstream in(dir + "/sweep.csv");
  std::string header, line;
  ASSERT_TRUE(std::getline(in, header));
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "fav,30,clustered,3,12.35,0.432100");
  EXPECT_FALSE(std::getline(in, line));
}

TEST(EmitReport, UnwritablePathIsAnError) {
  EXPECT_THROW(experiments::emit_report({}, "/no/such/dir/anywhere"), std::runtime_error);
}

TEST(FavSweep, ProducesCompleteOrderedRows) {
  auto cfg = tiny_config();
  auto rows = experiments::run_fav_sweep(cfg);
  // 1 seed x 2 shapes x 5 policies
  ASSERT_EQ(rows.size(), 10u);
  for (double x : {20.0, 5.0}) {
    double fs = total_of(rows, "fav", x, "full_store", 5);
    double ft = total_of(rows, "fav", x, "full_transcode", 5);
    double sot = total_of(rows, "fav", x, "store_or_transcode", 5);
    double partial = total_of(rows, "fav", x, "partial_store", 5);
    double clustered = total_of(rows, "fav", x, "clustered", 5);
    EXPECT_GT(fs, 0.0);
    EXPECT_LE(clustered, partial * (1 + 1e-12));
    EXPECT_LE(partial, sot * (1 + 1e-12));
    // per-video minima can only undercut the min of the repo sums
    EXPECT_LE(sot, std::min(fs, ft) * (1 + 1e-12));
    for (const SweepRow& r : rows)
      if (r.x == x && r.policy == "full_store") EXPECT_DOUBLE_EQ(r.normalized, 1.0);
  }
  // full_store identical across shapes: same structure, views don't matter
  EXPECT_EQ(total_of(rows, "fav", 20.0, "full_store", 5),
            total_of(rows, "fav", 5.0, "full_store", 5));
}

TEST(FavSweep, DeterministicAcrossRunsAndThreads) {
  auto cfg = tiny_config();
  auto a = experiments::run_fav_sweep(cfg);
  auto b = experiments::run_fav_sweep(cfg);
  EXPECT_TRUE(rows_equal(a, b));
  cfg.threads = 3;
  auto c = experiments::run_fav_sweep(cfg);
  EXPECT_TRUE(rows_equal(a, c));

  std::string d1 = testing::TempDir() + "det1", d2 = testing::TempDir() + "det2";
  std::filesystem::create_directories(d1);
  std::filesystem::create_directories(d2);
  experiments::emit_report(a, d1, &cfg);
  experiments::emit_report(c, d2, &cfg);
  EXPECT_EQ(slurp(d1 + "/sweep.csv"), slurp(d2 + "/sweep.csv"));
  EXPECT_EQ(slurp(d1 + "/summary.txt"), slurp(d2 + "/summary.txt"));
}

TEST(CdnSweep, SurchargeRaisesStorageOnlyCosts) {
  auto cfg = tiny_config();
  auto fav = experiments::run_fav_sweep(cfg);
  auto cdn = experiments::run_cdn_sweep(cfg);
  ASSERT_EQ(cdn.size(), fav.size());
  for (double x : {20.0, 5.0}) {
    EXPECT_GT(total_of(cdn, "cdn", x, "full_store", 5),
              total_of(fav, "fav", x, "full_store", 5));
    // nothing stored means the CDN toggle cannot change the bill
    EXPECT_EQ(total_of(cdn, "cdn", x, "full_transcode", 5),
              total_of(fav, "fav", x, "full_transcode", 5));
    double clustered = total_of(cdn, "cdn", x, "clustered", 5);
    for (const char* other :
         {"full_store", "full_transcode", "store_or_transcode", "partial_store"})
      EXPECT_LE(clustered, total_of(cdn, "cdn", x, other, 5) * (1 + 1e-12));
  }
}

TEST(ViewsSweep, FullStoreFlatAndTranscodeGrowing) {
  auto cfg = tiny_config();
  cfg.view_growth_steps_pct = {1, 3, 5};
  auto rows = experiments::run_views_sweep(cfg);
  ASSERT_EQ(rows.size(), 15u);
  double fs1 = total_of(rows, "views", 1.0, "full_store", 5);
  EXPECT_EQ(total_of(rows, "views", 3.0, "full_store", 5), fs1);
  EXPECT_EQ(total_of(rows, "views", 5.0, "full_store", 5), fs1);
  double prev = 0.0;
  for (double g : {1.0, 3.0, 5.0}) {
    double ft = total_of(rows, "views", g, "full_transcode", 5);
    EXPECT_GT(ft, prev);
    prev = ft;
  }
}

TEST(Sweeps, CalibrationFailureSkipsRowsAndReports) {
  auto cfg = tiny_config();
  cfg.n_videos = 1;  // a 20% target is unreachable with one video
  std::vector<std::string> failures;
  auto rows = experiments::run_fav_sweep(cfg, &failures);
  EXPECT_TRUE(rows.empty());
  ASSERT_EQ(failures.size(), 1u);
  EXPECT_NE(failures[0].find("seed 5"), std::string::npos);
}

}  // namespace
