#include "e2mac/lifetime_model.hpp"

#include <algorithm>
#include <cmath>

namespace e2mac {

double PowerProfile::transmit_power(int mode) const {
  switch (static_cast<TransmitMode>(mode)) {
    case TransmitMode::member: return p_t_m;
    case TransmitMode::head: return p_t_h;
    case TransmitMode::direct: return p_t_d;
  }
  throw std::domain_error("unknown transmit mode");
}

double node_lifetime(double e_remaining, const TrafficProfile& traffic, double rate,
                     const PowerProfile& power, TransmitMode mode) {
  if (rate <= 0.0) throw std::domain_error("node_lifetime: rate must be positive");
  const double tx_time = traffic.d_i / rate;
  if (tx_time + power.t_a > traffic.t_i)
    throw infeasible_duty_cycle("node_lifetime: transmission plus active time exceeds the cycle");
  const double p_t = power.transmit_power(static_cast<int>(mode));
  const double per_cycle = power.e_s + power.p_s * (traffic.t_i - tx_time - power.t_a) +
                           tx_time * (power.p_c + power.xi * p_t);
  if (per_cycle <= 0.0) throw std::domain_error("node_lifetime: nonpositive per-cycle energy");
  return e_remaining * traffic.t_i / per_cycle;
}

double cm_cycle_energy(const ClusterModel&, const PowerProfile& power,
                       const TrafficProfile& traffic, double r_m) {
  if (r_m <= 0.0) throw std::domain_error("cm_cycle_energy: rate must be positive");
  return power.e_s + traffic.d_i * (power.p_c + power.xi * power.p_t_m) / r_m;
}

double ch_cycle_energy(const ClusterModel& cluster, const PowerProfile& power,
                       const TrafficProfile& traffic, double r_m, double r_h) {
  if (r_m <= 0.0 || r_h <= 0.0) throw std::domain_error("ch_cycle_energy: rates must be positive");
  if (cluster.z < 1.0) throw std::domain_error("ch_cycle_energy: cluster size must be >= 1");
  const double d = traffic.d_i;
  return power.e_s_h + (cluster.z - 1.0) * d * power.p_l / r_m +
         (1.0 + cluster.lambda * (cluster.z - 1.0)) * d * (power.p_c + power.xi * power.p_t_h) /
             r_h;
}

double cluster_lifetime(const ClusterModel& cluster, const PowerProfile& power,
                        const TrafficProfile& traffic, const RadioEnvironment& env, double d_h,
                        const RateFn& rate_m, const RateFn& rate_h) {
  if (d_h <= 0.0) throw std::domain_error("cluster_lifetime: BS distance must be positive");
  const double z = cluster.z;
  const double d_m = std::sqrt(z / (4.0 * cluster.sigma));
  const double r_m = rate_m(env, env.w_m, power.p_t_m, env.pl_intra.loss_linear(d_m), z);
  const double r_h = rate_h(env, env.w_h, power.p_t_h, env.pl_inter.loss_linear(d_h),
                            cluster.n_t / z);
  const double e_h = ch_cycle_energy(cluster, power, traffic, r_m, r_h);
  const double e_m = cm_cycle_energy(cluster, power, traffic, r_m);
  return cluster.e0 * cluster.t_c / (e_h / z + (1.0 - 1.0 / z) * e_m);
}

double cluster_lifetime_fdma(const ClusterModel& cluster, const PowerProfile& power,
                             const TrafficProfile& traffic, const RadioEnvironment& env,
                             double d_h) {
  if (d_h <= 0.0) throw std::domain_error("cluster_lifetime_fdma: BS distance must be positive");
  const double z = cluster.z;
  const double d = traffic.d_i;
  const double gamma_m = env.pl_intra.slope_db_per_decade / 10.0;
  const double gamma_h = env.pl_inter.slope_db_per_decade / 10.0;
  const double beta_m = std::pow(10.0, env.pl_intra.intercept_db / 10.0) /
                        std::pow(env.pl_intra.reference_distance_m, gamma_m);
  const double beta_h = std::pow(10.0, env.pl_inter.intercept_db / 10.0) /
                        std::pow(env.pl_inter.reference_distance_m, gamma_h);
  const double a1 = power.p_t_m * std::pow(4.0 * cluster.sigma, gamma_m / 2.0) /
                    (env.gamma_gap * env.n0 * env.w_m * beta_m);
  const double a2 = power.p_t_h * cluster.n_t /
                    (env.gamma_gap * env.n0 * env.w_h * beta_h * std::pow(d_h, gamma_h));
  const double denom =
      power.e_s + (power.e_s_h - power.e_s) / z +
      d * (z - 1.0) * (power.p_c + power.xi * power.p_t_m + power.p_l) /
          (env.w_m * env.cap_log(a1 * std::pow(z, 1.0 - gamma_m / 2.0))) +
      cluster.n_t * d * (power.p_c + power.xi * power.p_t_h) /
          (z * env.w_h * env.cap_log(a2 / z));
  return cluster.e0 * cluster.t_c / denom;
}

double fed_lifetime(std::span<const double> lifetimes) {
  if (lifetimes.empty()) throw std::domain_error("fed_lifetime: empty collection");
  return *std::min_element(lifetimes.begin(), lifetimes.end());
}

}  // namespace e2mac
