// Command-line front end: `simulate` reproduces the cost-comparison
// sweeps, `synth` writes a synthesized repository to disk.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "vodsim/config.hpp"
#include "vodsim/experiments.hpp"
#include "vodsim/workload.hpp"

namespace {

vodsim::config::SimConfig make_config(const std::string& config_path,
                                      const std::vector<std::uint64_t>& seed_override,
                                      bool paper_scale, int threads_override) {
  vodsim::config::SimConfig cfg;
  if (!config_path.empty()) cfg = vodsim::config::load_config(config_path);
  if (!seed_override.empty()) cfg.seeds = seed_override;
  if (paper_scale) cfg.n_videos = cfg.paper_scale_n_videos;
  if (threads_override > 0) cfg.threads = threads_override;
  cfg.validate();
  return cfg;
}

int run_simulate(const std::string& config_path, const std::string& scenario,
                 const std::string& out_dir, bool paper_scale,
                 const std::vector<std::uint64_t>& seeds, int threads) {
  auto cfg = make_config(config_path, seeds, paper_scale, threads);
  std::filesystem::create_directories(out_dir);

  std::vector<vodsim::experiments::SweepRow> rows;
  std::vector<std::string> failures;
  auto append = [&rows](std::vector<vodsim::experiments::SweepRow> more) {
    rows.insert(rows.end(), more.begin(), more.end());
  };
  if (scenario == "fav" || scenario == "all")
    append(vodsim::experiments::run_fav_sweep(cfg, &failures));
  if (scenario == "views" || scenario == "all")
    append(vodsim::experiments::run_views_sweep(cfg, &failures));
  if (scenario == "cdn" || scenario == "all")
    append(vodsim::experiments::run_cdn_sweep(cfg, &failures));

  vodsim::experiments::emit_report(rows, out_dir, &cfg);
  std::cout << "wrote " << out_dir << "/sweep.csv and " << out_dir << "/summary.txt ("
            << rows.size() << " rows)\n";
  if (!failures.empty()) {
    std::cerr << failures.size() << " calibration failure(s); affected rows skipped\n";
    return 1;
  }
  return 0;
}

int run_synth(const std::string& config_path, const std::string& out_dir,
              std::uint64_t seed, int n_videos, int threads) {
  auto cfg = make_config(config_path, {}, false, threads);
  if (n_videos > 0) cfg.n_videos = n_videos;
  std::filesystem::create_directories(out_dir);
  auto repo = vodsim::workload::synthesize_repository(seed, cfg.n_videos, cfg.gop_stats,
                                                      cfg.time_model, cfg.threads);
  vodsim::workload::save_repository(repo, out_dir + "/videos.csv", out_dir + "/gops.csv");
  std::cout << "wrote " << repo.size() << " videos to " << out_dir << "/videos.csv (+ "
            << out_dir << "/gops.csv)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cloud storage-tiering cost simulator for on-demand video"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario = "all";
  std::string out_dir = "out";
  bool paper_scale = false;
  std::vector<std::uint64_t> seeds;
  int threads = 0;

  auto* sim = app.add_subcommand("simulate", "run the cost-comparison sweeps");
  sim->add_option("--config", config_path, "key=value config file");
  sim->add_option("--scenario", scenario, "fav | views | cdn | all")
      ->check(CLI::IsMember({"fav", "views", "cdn", "all"}));
  sim->add_option("--out", out_dir, "output directory")->required();
  sim->add_flag("--paper-scale", paper_scale, "use the paper-scale repository size");
  sim->add_option("--seeds", seeds, "override seeds (comma separated)")->delimiter(',');
  sim->add_option("--threads", threads, "worker threads (0 = config value)");

  std::uint64_t synth_seed = 1;
  int synth_n = 0;
  auto* synth = app.add_subcommand("synth", "synthesize a repository and save it");
  synth->add_option("--config", config_path, "key=value config file");
  synth->add_option("--out", out_dir, "output directory")->required();
  synth->add_option("--seed", synth_seed, "master seed");
  synth->add_option("--n", synth_n, "number of videos (0 = config value)");
  synth->add_option("--threads", threads, "worker threads (0 = config value)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return run_simulate(config_path, scenario, out_dir, paper_scale, seeds, threads);
    if (synth->parsed()) return run_synth(config_path, out_dir, synth_seed, synth_n, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
