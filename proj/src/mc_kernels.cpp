#include "e2mac/mc_kernels.hpp"

#include <omp.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "e2mac/cluster_geometry.hpp"

namespace e2mac::mc {

ChannelStats& ChannelStats::operator+=(const ChannelStats& o) {
  arrivals += o.arrivals;
  idle_sensed += o.idle_sensed;
  successes += o.successes;
  horizon += o.horizon;
  success_airtime += o.success_airtime;
  return *this;
}

ChannelStats simulate_channel_serial(const CsmaParams& p, std::uint64_t n_arrivals,
                                     std::uint64_t seed) {
  if (p.g <= 0.0) throw std::domain_error("simulate_channel: load must be positive");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(p.g);

  ChannelStats st;
  double now = 0.0;
  double vulnerable_end = -1.0;  // initiator start + delta_d
  double air_end = -1.0;         // last start + tau_p + delta
  bool period_clean = false;     // current period has a lone initiator
  std::uint64_t period_initiators = 0;

  auto close_period = [&] {
    if (period_initiators && period_clean) {
      ++st.successes;
      st.success_airtime += p.tau_p;
    }
    period_initiators = 0;
  };

  for (std::uint64_t k = 0; k < n_arrivals; ++k) {
    now += gap(rng);
    if (now < vulnerable_end) {
      // joins the vulnerable window: transmits into the fresh period and
      // collides it; the model books such arrivals with the backoff branch
      period_clean = false;
      air_end = std::max(air_end, now + p.tau_p + p.delta);
    } else if (now < air_end) {
      // detectable transmission on air: back off
    } else {
      close_period();
      ++st.idle_sensed;
      period_initiators = 1;
      period_clean = true;
      vulnerable_end = now + p.delta_d;
      air_end = now + p.tau_p + p.delta;
    }
  }
  close_period();
  st.arrivals = n_arrivals;
  st.horizon = now;
  return st;
}

ChannelStats simulate_channel(const CsmaParams& p, std::uint64_t n_arrivals, std::uint64_t seed,
                              int replicas) {
  if (replicas <= 0) replicas = omp_get_max_threads();
  const std::uint64_t per = (n_arrivals + replicas - 1) / replicas;
  std::vector<ChannelStats> parts(replicas);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < replicas; ++r)
    parts[r] = simulate_channel_serial(p, per, seed * 0x9e3779b97f4a7c15ULL + r + 1);
  ChannelStats st;
  for (const auto& part : parts) st += part;
  return st;
}

namespace {

DelayStats sample_delay_chunk(const CsmaParams& p, double p_i_hat, double p_is_hat,
                              std::uint64_t n_packets, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::exponential_distribution<double> backoff(1.0 / std::max(p.theta_b, 1e-300));

  DelayStats st;
  double total = 0.0;
  for (std::uint64_t i = 0; i < n_packets; ++i) {
    double delay = 0.0;
    bool delivered = false;
    for (int attempt = 0; attempt <= p.k_m; ++attempt) {
      const double u = uni(rng);
      if (u < p_is_hat) {
        delay += p.tau_p;
        delivered = true;
        break;
      }
      if (u < p_i_hat) {
        delay += p.theta_f + p.tau_p;  // collided transmission
      } else {
        delay += p.theta_b > 0.0 ? backoff(rng) : 0.0;  // busy channel
      }
    }
    if (delivered) {
      total += delay;
      ++st.delivered;
    } else {
      ++st.dropped;
    }
  }
  st.mean_delay = st.delivered ? total / st.delivered : 0.0;
  return st;
}

}  // namespace

DelayStats sample_delay_serial(const CsmaParams& p, double p_i_hat, double p_is_hat,
                               std::uint64_t n_packets, std::uint64_t seed) {
  return sample_delay_chunk(p, p_i_hat, p_is_hat, n_packets, seed);
}

DelayStats sample_delay(const CsmaParams& p, double p_i_hat, double p_is_hat,
                        std::uint64_t n_packets, std::uint64_t seed, int replicas) {
  if (replicas <= 0) replicas = omp_get_max_threads();
  const std::uint64_t per = (n_packets + replicas - 1) / replicas;
  std::vector<DelayStats> parts(replicas);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < replicas; ++r)
    parts[r] = sample_delay_chunk(p, p_i_hat, p_is_hat, per, seed * 0x9e3779b97f4a7c15ULL + r + 1);
  DelayStats st;
  double weighted = 0.0;
  for (const auto& part : parts) {
    weighted += part.mean_delay * part.delivered;
    st.delivered += part.delivered;
    st.dropped += part.dropped;
  }
  st.mean_delay = st.delivered ? weighted / st.delivered : 0.0;
  return st;
}

VoronoiStats& VoronoiStats::operator+=(const VoronoiStats& o) {
  deployments += o.deployments;
  devices += o.devices;
  heads += o.heads;
  members += o.members;
  member_distance_sum += o.member_distance_sum;
  return *this;
}

VoronoiStats voronoi_stats_serial(double sigma, double p, double r_inner, double r_outer,
                                  std::uint64_t n_deployments, std::uint64_t seed0) {
  VoronoiStats st;
  for (std::uint64_t s = 0; s < n_deployments; ++s) {
    auto devices = deploy_ppp(sigma, r_inner, r_outer, seed0 + s);
    auto clusters = form_voronoi_clusters(devices, p, seed0 + s + 0x51ed270b9f112a5dULL);
    st.deployments += 1;
    st.devices += devices.size();
    st.heads += clusters.size();
    for (const auto& cl : clusters) {
      st.members += cl.member_ids.size();
      const Vec2 head = devices[cl.ch_id].position;
      for (int m : cl.member_ids)
        st.member_distance_sum += distance(devices[m].position, head);
    }
  }
  return st;
}

VoronoiStats voronoi_stats(double sigma, double p, double r_inner, double r_outer,
                           std::uint64_t n_deployments, std::uint64_t seed0) {
  const int threads = omp_get_max_threads();
  std::vector<VoronoiStats> parts(threads);
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(n_deployments); ++s) {
    auto& part = parts[omp_get_thread_num()];
    VoronoiStats one = voronoi_stats_serial(sigma, p, r_inner, r_outer, 1, seed0 + s);
    part += one;
  }
  VoronoiStats st;
  for (const auto& part : parts) st += part;
  return st;
}

}  // namespace e2mac::mc
