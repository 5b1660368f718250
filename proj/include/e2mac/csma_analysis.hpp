#pragma once

#include <algorithm>
#include <vector>

namespace e2mac {

// Non-persistent CSMA/CA channel parameters. g aggregates new arrivals and
// retransmissions. The energy triple (e_s, e_f, e_b) can be given directly or
// derived from the power fields via derive_energies().
struct CsmaParams {
  double g = 0.0;        // aggregate arrival rate [1/s]
  double tau_p = 1.0;    // transmission time [s]
  double delta_d = 0.0;  // detection delay [s]
  double delta = 0.0;    // propagation delay [s]
  double theta_b = 0.0;  // mean backoff after busy channel [s]
  double theta_f = 0.0;  // mean backoff after collision [s]
  double tau_r = 0.0;    // ack round-trip [s]
  int k_m = 50;          // max transmission attempts per packet
  int n = 1;             // contention phases
  double d_tilde = 0.0;  // payload [bits]
  double e_s = 0.0;      // energy, successful transmission [J]
  double e_f = 0.0;      // energy, collided transmission [J]
  double e_b = 0.0;      // energy, backoff after busy channel [J]
  double p_l = 0.0;
  double p_c = 0.0;
  double p_t_m = 0.0;
  double xi = 1.0;

  double big_t() const { return tau_p + delta_d + delta; }
  // e_s = (p_c + xi p_t) tau_p + p_l tau_r; e_f = e_s + p_l theta_f; e_b = p_l theta_b
  void derive_energies();
  // per-phase view: g -> g/n, all else unchanged
  CsmaParams per_phase() const;
};

struct ChannelProbs {
  double p_i = 1.0;   // channel sensed idle at a packet arrival
  double p_s = 1.0;   // no interferer within the detection window
  double p_is = 1.0;  // both: the arrival yields a successful transmission
};

struct CsmaMetrics {
  double y_hat = 0.0;
  double p_i = 1.0;
  double p_s = 1.0;
  double p_is = 1.0;
  double e_cons = 0.0;
  double u_e = 0.0;
  double u_s = 0.0;
  double delay = 0.0;
};

// Mean offset of the last interferer inside the detection window:
// delta_d - (1 - e^{-g delta_d})/g, continuously extended to 0 at g = 0.
double busy_tail(double g, double delta_d);

ChannelProbs channel_probabilities(const CsmaParams& p);

// (1-p_i) e_b + p_i (1-p_s) e_f + p_i p_s e_s
double per_packet_energy(const CsmaParams& p);

// d_tilde * p_is / e_cons, evaluated through the exact closed expansion [bits/J]
double energy_efficiency(const CsmaParams& p);

// g tau_p / (1 + g T e^{g delta_d}) * r_in [bits/s]; r_in = 1 gives the
// dimensionless airtime fraction.
double throughput(const CsmaParams& p, double r_in = 1.0);

// Finite-k_m expected delay between arrival and successful transmission [s].
double mean_delay(const CsmaParams& p);
// k_m >> 1 closed approximation of the same quantity.
double mean_delay_high_retry(const CsmaParams& p);

// Metrics with the load split across n phases (g -> g/n); the delay term uses
// the phase-diluted idle probability p_i/n.
CsmaMetrics n_phase_metrics(const CsmaParams& p, double r_in = 1.0);

// Zero-detection-delay tradeoff curves parameterized by the normalized
// spectral efficiency u in (0,1).
double zero_dd_energy_efficiency(const CsmaParams& p, double u_s_norm);
double zero_dd_delay(const CsmaParams& p, double u_s_norm);
struct TradeoffPoint {
  double u_s_norm;
  double u_e;
  double delay;
};
std::vector<TradeoffPoint> zero_dd_tradeoffs(const CsmaParams& p, int num_points = 64);

// Principal branch of the Lambert W function (x >= -1/e), |W e^W - x| <= 1e-12 rel.
double lambert_w(double x);

// Table-style intra-cluster scheduling rules shared by the optimizer and the
// simulator: per-cluster window T_intra = min(z * per_member, cap), backoffs
// theta_b = theta_f = T_intra / (divisor * n).
struct ContentionSchedule {
  double t_intra_per_member = 1e-3;  // [s]
  double t_intra_cap = 0.2;          // [s]
  double backoff_divisor = 5.0;
  int n_phases = 1;
  double delta_d = 1e-3;  // [s]

  double t_intra(double z) const { return std::min(z * t_intra_per_member, t_intra_cap); }
  double theta_b(double z) const { return t_intra(z) / (backoff_divisor * n_phases); }
  // in-window aggregate arrival rate: z devices' per-cycle traffic compressed
  // into the contention window
  double in_window_load(double z, double r_g, double t_ra) const {
    return z * r_g * t_ra / t_intra(z);
  }
};

}  // namespace e2mac
