#pragma once

#include <span>
#include <stdexcept>

#include "e2mac/radio_models.hpp"

namespace e2mac {

// Per-device power/energy constants. Energies are per duty cycle, powers in W.
struct PowerProfile {
  double p_c = 0.02;    // circuit power, transmit mode
  double p_s = 0.0;     // sleep power
  double p_l = 0.02;    // listening power
  double p_t_m = 0.05;  // member transmit power
  double p_t_h = 0.2;   // head transmit power
  double p_t_d = 0.2;   // direct-mode transmit power
  double xi = 2.0;      // inverse PA efficiency, >= 1
  double e_s = 0.0;     // static energy per cycle, member
  double e_s_h = 0.0;   // static energy per cycle, head
  double e_s_d = 0.0;   // static energy per cycle, direct
  double t_a = 0.0;     // active non-transmit duration per cycle [s]

  double transmit_power(int mode) const;
};

enum class TransmitMode { member = 0, head = 1, direct = 2 };

struct TrafficProfile {
  double t_i = 25200.0;   // mean report interval [s]
  double d_i = 40000.0;   // mean packet size [bits]
  double r_g = 1.0 / 25200.0;  // packet generation rate [1/s]
};

struct ClusterModel {
  double z = 100.0;      // average cluster size, >= 1
  double lambda = 1.0;   // packet-length compression coefficient, (0,1]
  double t_c = 1000.0;   // cluster duty cycle [s]
  double e0 = 2.0;       // reference remaining energy [J]
  double sigma = 6.4305027511876904e-3;  // device density [1/m^2]
  double n_t = 5000.0;   // device count
};

struct infeasible_duty_cycle : std::domain_error {
  using std::domain_error::domain_error;
};

// Expected remaining lifetime of a single node [s].
double node_lifetime(double e_remaining, const TrafficProfile& traffic, double rate,
                     const PowerProfile& power, TransmitMode mode);

// Per-cycle energy in member mode [J].
double cm_cycle_energy(const ClusterModel& cluster, const PowerProfile& power,
                       const TrafficProfile& traffic, double r_m);

// Per-cycle energy in head mode [J].
double ch_cycle_energy(const ClusterModel& cluster, const PowerProfile& power,
                       const TrafficProfile& traffic, double r_m, double r_h);

// Expected per-node lifetime of a rotating cluster at BS distance d_h [s].
double cluster_lifetime(const ClusterModel& cluster, const PowerProfile& power,
                        const TrafficProfile& traffic, const RadioEnvironment& env, double d_h,
                        const RateFn& rate_m, const RateFn& rate_h);

// FDMA/FDMA closed form of the same lifetime (lambda = 1).
double cluster_lifetime_fdma(const ClusterModel& cluster, const PowerProfile& power,
                             const TrafficProfile& traffic, const RadioEnvironment& env,
                             double d_h);

// First-energy-drain reducer: minimum of the individual lifetimes.
double fed_lifetime(std::span<const double> lifetimes);

}  // namespace e2mac
