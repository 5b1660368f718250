#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "e2mac/config.hpp"
#include "e2mac/mc_kernels.hpp"
#include "e2mac/report.hpp"

using namespace e2mac;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON configuration file")->required();
  cmd->add_option("--out-dir", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "base random seed");
  cmd->add_option("--jobs", opts.jobs, "parallel sweep width (0 = all cores)");
}

int cmd_analyze_csma(const CommonOpts& opts) {
  const AppConfig cfg = load_config(opts.config_path);
  const CsmaSweepSpec spec = make_csma_sweep(cfg);
  std::vector<std::array<double, 8>> rows;
  for (int n : spec.n_values) {
    for (double g : spec.g_values) {
      CsmaParams p = spec.base;
      p.g = g;
      p.n = n;
      if (g == 0.0) {
        rows.push_back({g, double(n), 1.0, 1.0, 1.0, p.d_tilde / p.e_s, 0.0, p.tau_p});
        continue;
      }
      const auto m = n_phase_metrics(p, spec.r_in);
      rows.push_back({g, double(n), m.p_i, m.p_s, m.p_is, m.u_e, m.u_s, m.delay});
    }
  }
  ReportWriter report(opts.out_dir, cfg, "analyze-csma", {opts.seed});
  report.write_csma_sweep(rows);
  report.write_manifest();
  std::cout << "analyze-csma: " << rows.size() << " rows -> " << report.dir().string() << "\n";
  return 0;
}

ClusterLifetimeFn build_objective(const AppConfig& cfg, const OptimizerSpec& spec, double d_h) {
  if (spec.objective == "contention")
    return make_contention_lifetime_objective(cfg.cluster, cfg.power, cfg.traffic, cfg.env, d_h,
                                              cfg.sched, spec.e_s_h_lump);
  return make_lifetime_objective(cfg.cluster, cfg.power, cfg.traffic, cfg.env, d_h, make_fdma(),
                                 make_fdma());
}

int cmd_optimize_cluster(const CommonOpts& opts) {
  const AppConfig cfg = load_config(opts.config_path);
  const OptimizerSpec spec = make_optimizer(cfg);
  const auto objective = build_objective(cfg, spec, spec.d_h);

  std::vector<long> excluded;
  const auto best = optimal_cluster_size(objective, spec.z_min, spec.z_max, &excluded);
  for (long z : excluded)
    std::cerr << "optimize-cluster: warning: z = " << z << " infeasible, excluded\n";

  std::vector<long> table = spec.report_z;
  table.push_back(best.z_star);
  std::sort(table.begin(), table.end());
  table.erase(std::unique(table.begin(), table.end()), table.end());

  std::vector<std::string> rows;
  for (long z : table) {
    double v = std::nan("");
    try {
      v = objective(static_cast<double>(z));
    } catch (const std::exception&) {
    }
    std::ostringstream os;
    os << z << ',' << v << ',' << (z == best.z_star ? 1 : 0);
    rows.push_back(os.str());
  }

  ReportWriter report(opts.out_dir, cfg, "optimize-cluster", {opts.seed});
  report.write_table("cluster_size.csv", "z,lifetime_s,is_optimum", rows);

  if (spec.cdf_samples > 0) {
    // lifetime CDF over the BS distance of a uniform cell point
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> lifetimes;
    for (int i = 0; i < spec.cdf_samples; ++i) {
      const double r2 = cfg.r_inner * cfg.r_inner +
                        uni(rng) * (cfg.r_outer * cfg.r_outer - cfg.r_inner * cfg.r_inner);
      lifetimes.push_back(
          build_objective(cfg, spec, std::sqrt(r2))(static_cast<double>(best.z_star)));
    }
    std::sort(lifetimes.begin(), lifetimes.end());
    std::vector<std::string> cdf_rows;
    for (std::size_t i = 0; i < lifetimes.size(); ++i) {
      std::ostringstream os;
      os << lifetimes[i] << ',' << (i + 1.0) / lifetimes.size();
      cdf_rows.push_back(os.str());
    }
    report.write_table("lifetime_cdf_analytic.csv", "lifetime_s,fraction", cdf_rows);
  }

  report.write_manifest();
  std::cout << "optimize-cluster: z* = " << best.z_star << " lifetime = " << best.lifetime
            << " s -> " << report.dir().string() << "\n";
  return 0;
}

int cmd_feasibility(const CommonOpts& opts) {
  const AppConfig cfg = load_config(opts.config_path);
  const FeasibilityInputs inp = make_feasibility(cfg);
  const auto res = clustering_feasibility(inp);
  double crossover = std::nan("");
  try {
    crossover = crossover_payload(inp);
  } catch (const std::exception&) {
  }

  std::ostringstream os;
  os << inp.n << ',' << inp.r << ',' << inp.big_r << ',' << inp.lambda << ',' << inp.traffic.d_i
     << ',' << (res.feasible ? 1 : 0) << ',' << res.l_c << ',' << res.l_d << ','
     << (res.threshold_omega ? *res.threshold_omega : std::nan("")) << ',' << crossover;

  ReportWriter report(opts.out_dir, cfg, "feasibility", {opts.seed});
  report.write_table("feasibility.csv",
                     "n,region_radius_m,bs_distance_m,lambda,payload_bits,feasible,l_c_s,l_d_s,"
                     "threshold_omega,crossover_payload_bits",
                     {os.str()});
  report.write_manifest();
  std::cout << "feasibility: " << (res.feasible ? "clustered" : "direct")
            << " wins; L_c = " << res.l_c << " s, L_d = " << res.l_d
            << " s, crossover = " << crossover << " bits -> " << report.dir().string() << "\n";
  return 0;
}

sim::MacVariant parse_variant(const std::string& v) {
  if (v == "e2mac") return sim::MacVariant::e2mac;
  if (v == "e2mac-n") return sim::MacVariant::e2mac_n;
  if (v == "e2mac-r") return sim::MacVariant::e2mac_r;
  if (v == "cmac") return sim::MacVariant::cmac;
  throw config_error("variant must be e2mac, e2mac-n, e2mac-r or cmac");
}

int cmd_simulate(const CommonOpts& opts, const std::string& variant) {
  AppConfig cfg = load_config(opts.config_path);
  sim::SimConfig sc = make_sim_config(cfg);
  sc.seed = opts.seed;
  if (!variant.empty()) sc.variant = parse_variant(variant);
  const auto out = sim::run_sim(sc);

  sim::VariantSummary row;
  row.variant = out.per_variant_label;
  row.seed = sc.seed;
  row.fed_s = out.fed;
  row.last_death_s = out.last_death;
  row.delay_p50_s = sim::percentile(out.packet_delays, 0.5);
  row.delay_max_s = out.packet_delays.empty()
                        ? 0.0
                        : *std::max_element(out.packet_delays.begin(), out.packet_delays.end());

  ReportWriter report(opts.out_dir, cfg, "simulate", {sc.seed});
  report.write_lifetime_cdf(out);
  report.write_delay_cdf(out);
  if (sc.event_log) report.write_event_log(out);
  report.write_summary({row});
  report.write_manifest();
  std::cout << "simulate " << out.per_variant_label << ": fed = " << out.fed
            << " s, last death = " << out.last_death << " s, delivered = " << out.delivered
            << ", dropped = " << out.dropped << " -> " << report.dir().string() << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& variants, int n_seeds) {
  AppConfig cfg = load_config(opts.config_path);
  std::vector<sim::SimConfig> cfgs;
  for (const auto& v : variants) {
    sim::SimConfig sc = make_sim_config(cfg);
    sc.variant = parse_variant(v);
    cfgs.push_back(sc);
  }
  std::vector<std::uint64_t> seeds;
  for (int s = 0; s < n_seeds; ++s) seeds.push_back(opts.seed + s);

  const auto rows = sim::compare_variants(cfgs, seeds, opts.jobs);
  ReportWriter report(opts.out_dir, cfg, "sweep", seeds);
  report.write_summary(rows);
  report.write_manifest();
  std::cout << "sweep: " << rows.size() << " runs -> " << report.dir().string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster lifetime and contention analysis toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string variant;
  std::vector<std::string> variants = {"e2mac"};
  int n_seeds = 1;

  auto* c1 = app.add_subcommand("analyze-csma", "closed-form contention sweeps");
  add_common(c1, opts);
  auto* c2 = app.add_subcommand("optimize-cluster", "lifetime-optimal cluster size");
  add_common(c2, opts);
  auto* c3 = app.add_subcommand("feasibility", "region clustering feasibility and crossover");
  add_common(c3, opts);
  auto* c4 = app.add_subcommand("simulate", "one seeded run");
  add_common(c4, opts);
  c4->add_option("--variant", variant, "e2mac | e2mac-n | e2mac-r | cmac");
  auto* c5 = app.add_subcommand("sweep", "variant x seed comparison table");
  add_common(c5, opts);
  c5->add_option("--variants", variants, "variants to compare");
  c5->add_option("--seeds", n_seeds, "number of consecutive seeds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c1->parsed()) return cmd_analyze_csma(opts);
    if (c2->parsed()) return cmd_optimize_cluster(opts);
    if (c3->parsed()) return cmd_feasibility(opts);
    if (c4->parsed()) return cmd_simulate(opts, variant);
    if (c5->parsed()) return cmd_sweep(opts, variants, n_seeds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
