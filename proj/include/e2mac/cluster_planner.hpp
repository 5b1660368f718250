#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "e2mac/cluster_geometry.hpp"
#include "e2mac/csma_analysis.hpp"

namespace e2mac {

// Everything needed to score CH candidates inside one cluster: the member set
// Psi, complete symmetric pairwise distances, distances to the BS, and the
// radio/power/cluster parameters the per-cycle energies depend on.
struct ChCandidateContext {
  std::vector<DeviceState> members;
  std::map<std::pair<int, int>, double> pairwise_distances;
  std::map<int, double> bs_distances;
  double t_c = 1000.0;
  RadioEnvironment env;
  PowerProfile power;
  ClusterModel cluster;
  RateFn rate_m = make_fdma();
  RateFn rate_h = make_fdma();
  // When set, the member->candidate listening distance uses the exact average
  // over members instead of the off-centre circle estimate.
  bool exact_listen_distance = false;

  static ChCandidateContext build(std::vector<DeviceState> members, const Vec2& bs_position,
                                  double t_c, const RadioEnvironment& env,
                                  const PowerProfile& power, const ClusterModel& cluster);

  double pair_distance(int i, int j) const;
  Vec2 centroid() const;
  // Expected per-cycle energy of node i when k is the CH.
  double energy_per_cycle(int i, int k) const;
};

struct ChSelection {
  int ch_id = -1;
  double min_lifetime = 0.0;
};

// Cached per-cycle energy matrix for one cluster membership. cost[a][b] is the
// energy of member slot a per cycle when slot b is the CH; geometry and rates
// are evaluated once at build time.
struct ClusterEnergyModel {
  std::vector<int> ids;  // ascending member ids
  std::vector<std::vector<double>> cost;
  double t_c = 0.0;

  static ClusterEnergyModel build(const ChCandidateContext& ctx);
  int slot(int id) const;
  ChSelection select(const std::map<int, double>& energies) const;
};

// argmax over candidates of the minimum member lifetime; ties to the lowest id.
ChSelection ch_select(const ChCandidateContext& ctx, const std::map<int, double>& energies);

struct ChTenure {
  int ch_id = -1;
  long k_cycles = 0;
  int bottleneck_id = -1;
  bool depleted = false;
};

// Smallest K >= 1 after which some other candidate overtakes i_star; K is
// capped at the depletion bound floor(min_j E_j / E_{j,i*}) when the closed
// test never fires.
ChTenure ch_tenure(const ChCandidateContext& ctx, const std::map<int, double>& energies,
                   int i_star);

struct FairnessResult {
  double max_gap = 0.0;
  bool fair = true;
};

FairnessResult maxmin_fairness_check(std::span<const double> death_times,
                                     double tolerance = 0.05);

// Cycle-level energy replay of one cluster: reselect the CH every
// `reselect_period` cycles (on-death reselection when period <= 0), charge the
// role energies, and record fractional death cycles per node.
std::map<int, double> replay_cluster_deaths(const ChCandidateContext& ctx,
                                            std::map<int, double> energies, long reselect_period);

struct ReformationResult {
  bool beneficial = false;
  double savings = 0.0;  // net energy saved per device [J]
};

ReformationResult reformation_decision(double e_ref, double t_dur, double t_c, double r,
                                       const ClusterModel& cluster, const PowerProfile& power,
                                       const TrafficProfile& traffic,
                                       const RadioEnvironment& env);

// Region-level clustering feasibility inputs: N devices in a disc of radius r
// at distance big_r from the BS, with SNR-targeted transmit powers.
struct FeasibilityInputs {
  int n = 2;
  double r = 50.0;
  double big_r = 250.0;
  double s_h = 100.0;  // target SNR at the CH, linear
  double s_b = 100.0;  // target SNR at the BS, linear
  double lambda = 1.0;
  double w_m = 360e3;
  double w_h = 144e3;
  PowerProfile power;
  TrafficProfile traffic;
  RadioEnvironment env;
  double e0 = 2.0;
  double t_c = 1000.0;

  double m_factor() const { return 1.0 + lambda * (n - 1.0); }
  double w_total() const { return w_m + w_h; }
  double s_bar(double s) const { return s / env.cap_log(s); }
  double e0_composite() const {
    return n * power.e_s_d - power.e_s_h - (n - 1.0) * power.e_s;
  }
  double q_factor() const;
};

struct FeasibilityResult {
  bool feasible = false;
  double l_c = 0.0;
  double l_d = 0.0;
  std::optional<double> threshold_omega;  // closed-form loss threshold, M != N only
};

FeasibilityResult clustering_feasibility(const FeasibilityInputs& inp);

// Payload at which the clustered and direct lifetimes cross, by bisection.
double crossover_payload(const FeasibilityInputs& inp);

// L_c(d_h = const, z) evaluator used by the cluster-size search.
using ClusterLifetimeFn = std::function<double(double z)>;

// Plain evaluator over fixed rate functions and static energies.
ClusterLifetimeFn make_lifetime_objective(ClusterModel tmpl, PowerProfile power,
                                          TrafficProfile traffic, RadioEnvironment env,
                                          double d_h, RateFn rate_m, RateFn rate_h);

// Contention-window parameterization: the member rate is contention-thinned
// with a z-dependent success probability, the head rate is a reserved link,
// and the static energies follow the schedule (e_s = r_g t_c p_c theta_b(z),
// e_s_h = p_c T_intra(z) + e_s_h_lump).
ClusterLifetimeFn make_contention_lifetime_objective(ClusterModel tmpl, PowerProfile power,
                                                     TrafficProfile traffic,
                                                     RadioEnvironment env, double d_h,
                                                     ContentionSchedule sched,
                                                     double e_s_h_lump);

struct ClusterSizeResult {
  long z_star = 1;
  double lifetime = 0.0;
};

// Integer search over [z_min, z_max]: ternary narrowing plus a +-2
// neighbourhood scan; z values where the objective is infeasible are skipped
// and reported through `excluded` when given.
ClusterSizeResult optimal_cluster_size(const ClusterLifetimeFn& objective, long z_min,
                                       long z_max, std::vector<long>* excluded = nullptr);

}  // namespace e2mac
