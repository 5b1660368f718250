#pragma once

#include <cstdint>

#include "e2mac/csma_analysis.hpp"

namespace e2mac::mc {

// Event-driven unslotted channel: Poisson scheduling points at rate g hit a
// channel with transmission time tau_p, detection delay delta_d and
// propagation delay delta. Arrivals inside an ongoing vulnerable window join
// and collide; arrivals into a detectable transmission back off; the rest
// start fresh busy periods.
struct ChannelStats {
  std::uint64_t arrivals = 0;
  std::uint64_t idle_sensed = 0;   // busy-period initiators
  std::uint64_t successes = 0;     // initiators whose window stayed clear
  double horizon = 0.0;            // simulated time [s]
  double success_airtime = 0.0;    // tau_p summed over successful periods [s]

  double p_i_hat() const { return arrivals ? double(idle_sensed) / arrivals : 1.0; }
  double p_is_hat() const { return arrivals ? double(successes) / arrivals : 1.0; }
  double airtime_fraction() const { return horizon > 0.0 ? success_airtime / horizon : 0.0; }

  ChannelStats& operator+=(const ChannelStats& o);
};

// Single-stream reference implementation.
ChannelStats simulate_channel_serial(const CsmaParams& p, std::uint64_t n_arrivals,
                                     std::uint64_t seed);

// Same statistics from `replicas` independent streams merged, OpenMP across
// replicas. Deterministic for a fixed (seed, replicas) pair.
ChannelStats simulate_channel(const CsmaParams& p, std::uint64_t n_arrivals, std::uint64_t seed,
                              int replicas = 0);

// Mean delivered-packet delay from a retry walk over empirical outcome
// frequencies: each attempt senses busy w.p. 1-p_i, collides w.p. p_i-p_is,
// succeeds w.p. p_is; busy costs an exponential mean-theta_b backoff, a
// collision costs theta_f + tau_p; packets drop after k_m failures.
struct DelayStats {
  double mean_delay = 0.0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};
DelayStats sample_delay_serial(const CsmaParams& p, double p_i_hat, double p_is_hat,
                               std::uint64_t n_packets, std::uint64_t seed);
DelayStats sample_delay(const CsmaParams& p, double p_i_hat, double p_is_hat,
                        std::uint64_t n_packets, std::uint64_t seed, int replicas = 0);

// Aggregated Poisson/Voronoi deployment statistics over many seeded
// deployments on the annulus [r_inner, r_outer).
struct VoronoiStats {
  std::uint64_t deployments = 0;
  std::uint64_t devices = 0;
  std::uint64_t heads = 0;
  std::uint64_t members = 0;
  double member_distance_sum = 0.0;

  double mean_devices() const { return deployments ? double(devices) / deployments : 0.0; }
  double mean_members_per_cluster() const { return heads ? double(members) / heads : 0.0; }
  double mean_member_distance() const {
    return members ? member_distance_sum / members : 0.0;
  }

  VoronoiStats& operator+=(const VoronoiStats& o);
};

VoronoiStats voronoi_stats_serial(double sigma, double p, double r_inner, double r_outer,
                                  std::uint64_t n_deployments, std::uint64_t seed0);
VoronoiStats voronoi_stats(double sigma, double p, double r_inner, double r_outer,
                           std::uint64_t n_deployments, std::uint64_t seed0);

}  // namespace e2mac::mc
