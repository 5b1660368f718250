#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "e2mac/cluster_planner.hpp"

namespace e2mac::sim {

enum class MacVariant { e2mac, e2mac_n, e2mac_r, cmac };

std::string variant_name(MacVariant v);

// CH reselection cadence: every `period_cycles` cycles, or only when the
// serving CH dies.
struct ReselectPolicy {
  long period_cycles = 1;
  bool on_death = false;
};

struct SimConfig {
  // deployment
  double r_inner = 50.0;
  double r_outer = 500.0;
  double n_devices = 500.0;  // mean PPP count; density derived from the annulus
  RadioEnvironment env;
  PowerProfile power;
  TrafficProfile traffic;

  // frame structure
  double t_ra = 1000.0;        // resource-allocation period [s]
  double intra_window = 1.4;   // [s], at the start of each period
  double inter_window = 1.0;   // [s], follows the intra window
  int n_bunches = 7;
  ContentionSchedule sched;    // T_intra / backoff / detection-delay rules
  int k_max_attempts = 50;

  // contention-free baseline
  int preambles = 54;
  double preamble_period = 0.02;  // [s] between reservation opportunities
  double preamble_time = 0.001;   // [s] preamble transmission
  double rar_listen = 0.01;       // [s] response listening per attempt
  double grant_offset = 0.01;     // [s] from grant to data start

  // policy
  MacVariant variant = MacVariant::e2mac;
  int n_phases = 1;
  double cluster_size = 100.0;  // z; CH probability is 1/z
  double lambda = 1.0;          // relay compression for member packets
  ReselectPolicy reselect;
  double e_ref = 0.0;     // per-device cluster-reforming charge [J]
  double e_select = 0.0;  // per-member signaling charge when the CH changes [J]
  double e0 = 2.0;        // initial battery [J]
  std::uint64_t seed = 1;
  bool event_log = false;
  long max_cycles = 5'000'000;

  void validate() const;  // throws std::invalid_argument naming the bad field
};

enum class EventKind { window, tx_start, tx_end, deliver, collide, busy, defer, drop, die };

struct SimEvent {
  double time = 0.0;
  int device = -1;
  EventKind kind = EventKind::deliver;
  double energy = 0.0;  // remaining energy after the event
  double a = 0.0;       // kind-specific payload (window end, tx end, ...)
  double b = 0.0;
  int aux = 0;          // bunch / phase / cluster tag
};

struct EnergyLedger {
  double initial = 0.0;
  double residual = 0.0;
  double spent = 0.0;
};

struct SimOutcome {
  std::map<int, double> death_times;
  double fed = 0.0;
  double last_death = 0.0;
  std::vector<double> packet_delays;  // delivered packets, arrival -> BS
  std::string per_variant_label;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;  // k_m exhaustion and CH-death losses
  std::map<int, EnergyLedger> ledgers;
  std::vector<SimEvent> events;  // populated when cfg.event_log
  std::vector<std::pair<double, double>> energy_trace;  // (cycle start, total residual)
};

SimOutcome run_sim(const SimConfig& cfg);

// Right-continuous empirical CDF of the death times: (time, fraction dead).
std::vector<std::pair<double, double>> lifetime_cdf(const SimOutcome& outcome);

// Empirical CDF of delivered-packet delays: (delay, fraction).
std::vector<std::pair<double, double>> delay_cdf(const SimOutcome& outcome);

struct VariantSummary {
  std::string variant;
  std::uint64_t seed = 0;
  double fed_s = 0.0;
  double last_death_s = 0.0;
  double delay_p50_s = 0.0;
  double delay_max_s = 0.0;
};

// Runs every config against every seed, OpenMP across runs, rows ordered by
// (config index, seed index).
std::vector<VariantSummary> compare_variants(const std::vector<SimConfig>& cfgs,
                                             const std::vector<std::uint64_t>& seeds,
                                             int jobs = 0);

double percentile(std::vector<double> values, double q);

}  // namespace e2mac::sim
