#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "e2mac/cluster_planner.hpp"
#include "e2mac/sim_engine.hpp"

namespace e2mac {

// One JSON document configures every subcommand. Sections: radio, power,
// traffic, cluster, cell, schedule, csma, optimizer, feasibility, sim.
// All values are SI; dB quantities carry a _db suffix and are converted once
// at load.
struct AppConfig {
  nlohmann::json raw;
  std::string raw_bytes;
  std::string path;

  RadioEnvironment env;
  PowerProfile power;
  TrafficProfile traffic;
  ClusterModel cluster;
  double r_inner = 50.0;
  double r_outer = 500.0;
  ContentionSchedule sched;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AppConfig load_config(const std::string& path);
AppConfig parse_config(const std::string& text, const std::string& path = "<inline>");

// csma sweep spec from the "csma" section
struct CsmaSweepSpec {
  CsmaParams base;
  std::vector<double> g_values;
  std::vector<int> n_values;
  double r_in = 1.0;
};
CsmaSweepSpec make_csma_sweep(const AppConfig& cfg);

// optimizer spec from the "optimizer" section
struct OptimizerSpec {
  long z_min = 2;
  long z_max = 1000;
  double d_h = 500.0;
  double e_s_h_lump = 1.5e-3;
  std::string objective = "contention";  // or "fdma"
  std::vector<long> report_z;            // extra rows for the lifetime table
  int cdf_samples = 0;                    // lifetime CDF over random d_h when > 0
};
OptimizerSpec make_optimizer(const AppConfig& cfg);

FeasibilityInputs make_feasibility(const AppConfig& cfg);

sim::SimConfig make_sim_config(const AppConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash_hex(const AppConfig& cfg);

}  // namespace e2mac
