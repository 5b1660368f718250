#include "e2mac/cluster_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace e2mac {

ChCandidateContext ChCandidateContext::build(std::vector<DeviceState> members,
                                             const Vec2& bs_position, double t_c,
                                             const RadioEnvironment& env,
                                             const PowerProfile& power,
                                             const ClusterModel& cluster) {
  ChCandidateContext ctx;
  ctx.members = std::move(members);
  ctx.t_c = t_c;
  ctx.env = env;
  ctx.power = power;
  ctx.cluster = cluster;
  for (std::size_t a = 0; a < ctx.members.size(); ++a) {
    const auto& da = ctx.members[a];
    ctx.bs_distances[da.id] = distance(da.position, bs_position);
    for (std::size_t b = a + 1; b < ctx.members.size(); ++b) {
      const auto& db = ctx.members[b];
      const double d = distance(da.position, db.position);
      ctx.pairwise_distances[{da.id, db.id}] = d;
      ctx.pairwise_distances[{db.id, da.id}] = d;
    }
  }
  return ctx;
}

double ChCandidateContext::pair_distance(int i, int j) const {
  auto it = pairwise_distances.find({i, j});
  if (it == pairwise_distances.end())
    throw std::domain_error("ChCandidateContext: missing pairwise distance");
  return it->second;
}

Vec2 ChCandidateContext::centroid() const {
  Vec2 c{0.0, 0.0};
  for (const auto& m : members) {
    c.x += m.position.x;
    c.y += m.position.y;
  }
  const double n = static_cast<double>(members.size());
  return {c.x / n, c.y / n};
}

double ChCandidateContext::energy_per_cycle(int i, int k) const {
  const DeviceState* dev_i = nullptr;
  const DeviceState* dev_k = nullptr;
  for (const auto& m : members) {
    if (m.id == i) dev_i = &m;
    if (m.id == k) dev_k = &m;
  }
  if (!dev_i || !dev_k) throw std::domain_error("energy_per_cycle: id outside the cluster");

  if (i != k) {
    const double d_ik = pair_distance(i, k);
    const double r_m = rate_m(env, env.w_m, power.p_t_m, env.pl_intra.loss_linear(d_ik),
                              cluster.z);
    if (r_m <= 0.0) throw std::domain_error("energy_per_cycle: nonpositive member rate");
    return power.e_s + dev_i->traffic.d_i * (power.p_c + power.xi * power.p_t_m) / r_m;
  }

  const double psi = static_cast<double>(members.size()) - 1.0;
  double d_tilde = 0.0;
  for (const auto& m : members) d_tilde += m.traffic.d_i;
  d_tilde /= static_cast<double>(members.size());

  double d_listen;
  if (exact_listen_distance) {
    d_listen = 0.0;
    for (const auto& m : members)
      if (m.id != k) d_listen += pair_distance(m.id, k);
    d_listen = psi > 0.0 ? d_listen / psi : mean_member_distance(cluster.z, cluster.sigma);
  } else {
    const double big_r = cluster_radius_estimate(cluster.z, cluster.sigma);
    const double r_off = std::min(distance(dev_k->position, centroid()), big_r);
    d_listen = avg_distance_to_offcenter_ch(r_off, big_r);
  }

  const double r_m_listen = rate_m(env, env.w_m, power.p_t_m,
                                   env.pl_intra.loss_linear(d_listen), cluster.z);
  const double d_kb = bs_distances.at(k);
  const double r_h = rate_h(env, env.w_h, power.p_t_h, env.pl_inter.loss_linear(d_kb),
                            cluster.n_t / cluster.z);
  if (r_m_listen <= 0.0 || r_h <= 0.0)
    throw std::domain_error("energy_per_cycle: nonpositive head rate");
  return power.e_s_h + psi * d_tilde * power.p_l / r_m_listen +
         (1.0 + cluster.lambda * psi) * d_tilde * (power.p_c + power.xi * power.p_t_h) / r_h;
}

ClusterEnergyModel ClusterEnergyModel::build(const ChCandidateContext& ctx) {
  ClusterEnergyModel model;
  model.t_c = ctx.t_c;
  for (const auto& m : ctx.members) model.ids.push_back(m.id);
  std::sort(model.ids.begin(), model.ids.end());
  const std::size_t n = model.ids.size();
  model.cost.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      model.cost[a][b] = ctx.energy_per_cycle(model.ids[a], model.ids[b]);
  return model;
}

int ClusterEnergyModel::slot(int id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id)
    throw std::domain_error("ClusterEnergyModel: unknown member id");
  return static_cast<int>(it - ids.begin());
}

ChSelection ClusterEnergyModel::select(const std::map<int, double>& energies) const {
  if (ids.empty()) throw std::domain_error("ch_select: empty cluster");
  std::vector<double> e(ids.size());
  for (std::size_t a = 0; a < ids.size(); ++a) e[a] = energies.at(ids[a]);

  ChSelection sel;
  sel.min_lifetime = -std::numeric_limits<double>::max();
  for (std::size_t b = 0; b < ids.size(); ++b) {
    double worst = std::numeric_limits<double>::max();
    for (std::size_t a = 0; a < ids.size(); ++a)
      worst = std::min(worst, e[a] * t_c / cost[a][b]);
    if (worst > sel.min_lifetime) {
      sel.min_lifetime = worst;
      sel.ch_id = ids[b];  // ids ascending, so the first winner has the lowest id
    }
  }
  return sel;
}

namespace {

// min over members of E_j * t_c / E_{j,candidate}; also reports the argmin
std::pair<double, int> min_lifetime_under(const ChCandidateContext& ctx,
                                          const std::map<int, double>& energies, int candidate) {
  double best = std::numeric_limits<double>::max();
  int arg = -1;
  for (const auto& m : ctx.members) {
    const double e = energies.at(m.id);
    const double life = e * ctx.t_c / ctx.energy_per_cycle(m.id, candidate);
    if (life < best || (life == best && m.id < arg)) {
      best = life;
      arg = m.id;
    }
  }
  return {best, arg};
}

}  // namespace

ChSelection ch_select(const ChCandidateContext& ctx, const std::map<int, double>& energies) {
  return ClusterEnergyModel::build(ctx).select(energies);
}

ChTenure ch_tenure(const ChCandidateContext& ctx, const std::map<int, double>& energies,
                   int i_star) {
  ChTenure out;
  out.ch_id = i_star;

  // bottleneck node under each candidate, at the reference time
  std::map<int, int> bottleneck;
  for (const auto& cand : ctx.members)
    bottleneck[cand.id] = min_lifetime_under(ctx, energies, cand.id).second;
  out.bottleneck_id = bottleneck.at(i_star);

  // depletion bound: cycles until the first node would run dry under i_star
  double depletion = std::numeric_limits<double>::max();
  for (const auto& m : ctx.members)
    depletion = std::min(depletion, energies.at(m.id) / ctx.energy_per_cycle(m.id, i_star));
  const long k_cap = std::max<long>(1, static_cast<long>(std::floor(depletion)));

  const int mi = out.bottleneck_id;
  const double e_mi = energies.at(mi);
  const double cost_mi_star = ctx.energy_per_cycle(mi, i_star);
  for (long k = 1; k <= k_cap; ++k) {
    const double lhs = (e_mi - k * cost_mi_star) / cost_mi_star;
    for (const auto& j : ctx.members) {
      const int mj = bottleneck.at(j.id);
      const double rhs = (energies.at(mj) - k * ctx.energy_per_cycle(mj, i_star)) /
                         ctx.energy_per_cycle(mj, j.id);
      if (lhs < rhs) {
        out.k_cycles = k;
        return out;
      }
    }
  }
  out.k_cycles = k_cap;
  out.depleted = true;
  return out;
}

FairnessResult maxmin_fairness_check(std::span<const double> death_times, double tolerance) {
  if (death_times.empty()) throw std::domain_error("maxmin_fairness_check: empty trace");
  double lo = death_times[0], hi = death_times[0], sum = 0.0;
  for (double t : death_times) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    sum += t;
  }
  const double mean = sum / static_cast<double>(death_times.size());
  FairnessResult res;
  res.max_gap = hi - lo;
  res.fair = mean > 0.0 ? res.max_gap <= tolerance * mean : res.max_gap == 0.0;
  return res;
}

std::map<int, double> replay_cluster_deaths(const ChCandidateContext& ctx,
                                            std::map<int, double> energies,
                                            long reselect_period) {
  std::map<int, double> death_cycle;
  ChCandidateContext live = ctx;
  long cycle = 0;
  int current_ch = -1;
  long cycles_held = 0;

  while (!live.members.empty()) {
    const bool on_death = reselect_period <= 0;
    const bool need_select =
        current_ch < 0 || (!on_death && cycles_held % reselect_period == 0);
    if (need_select) {
      current_ch = ch_select(live, energies).ch_id;
      cycles_held = 0;
    }

    // charge one cycle; members that cannot afford it die part-way through
    std::vector<int> died;
    for (const auto& m : live.members) {
      const double cost = live.energy_per_cycle(m.id, current_ch);
      double& e = energies.at(m.id);
      if (e < cost) {
        death_cycle[m.id] = cycle + (cost > 0.0 ? e / cost : 0.0);
        e = 0.0;
        died.push_back(m.id);
      } else {
        e -= cost;
      }
    }
    ++cycle;
    ++cycles_held;

    if (!died.empty()) {
      std::erase_if(live.members, [&](const DeviceState& m) {
        return std::find(died.begin(), died.end(), m.id) != died.end();
      });
      if (std::find(died.begin(), died.end(), current_ch) != died.end()) current_ch = -1;
    }
    if (cycle > 100'000'000L)
      throw std::runtime_error("replay_cluster_deaths: runaway replay");
  }
  return death_cycle;
}

ReformationResult reformation_decision(double e_ref, double t_dur, double t_c, double r,
                                       const ClusterModel& cluster, const PowerProfile& power,
                                       const TrafficProfile& traffic,
                                       const RadioEnvironment& env) {
  if (t_c <= 0.0 || t_dur < 0.0)
    throw std::domain_error("reformation_decision: invalid durations");
  const double x = std::sqrt(cluster.sigma / cluster.z);
  const double d_cent = std::sqrt(cluster.z / (4.0 * cluster.sigma));
  const double d_r = 0.5 / x + 2.0 * r * r * x / 3.0 - 0.25 * std::pow(r, 4) * std::pow(x, 3);

  auto member_energy = [&](double d) {
    const double rate =
        fdma_rate(env, env.w_m, power.p_t_m, env.pl_intra.loss_linear(d), cluster.z);
    return power.e_s + traffic.d_i * (power.p_c + power.xi * power.p_t_m) / rate;
  };
  const double e_if_ref = member_energy(d_cent);
  const double e_if_not = member_energy(d_r);

  ReformationResult res;
  res.savings = t_dur / t_c * (e_if_not - e_if_ref) - e_ref;
  res.beneficial = res.savings > 0.0;
  return res;
}

double FeasibilityInputs::q_factor() const {
  const double lb = env.cap_log(s_b);
  const double lh = env.cap_log(s_h);
  const double nn = static_cast<double>(n);
  return m_factor() / (w_h * lb) + 2.0 * (nn - 1.0) * (nn - 1.0) / (w_m * lh) -
         nn * nn / (w_total() * lb);
}

namespace {

struct RegionLifetimes {
  double l_c;
  double l_d;
};

// Clustered vs direct lifetime of the region with SNR-targeted powers,
// P_l = P_c and FDMA sharing.
RegionLifetimes region_lifetimes(const FeasibilityInputs& inp, double payload) {
  const double nn = static_cast<double>(inp.n);
  const double r_bar = mean_pairwise_distance_disc(inp.r);
  const double omega_m = inp.env.pl_intra.loss_linear(r_bar);
  const double omega_h = inp.env.pl_inter.loss_linear(inp.big_r);
  const double noise = inp.env.n0 * inp.env.gamma_gap;

  // transmit powers meeting the SNR targets on each link
  const double p_m = inp.s_h * noise * omega_m * inp.w_m / (nn - 1.0);
  const double p_h = inp.s_b * noise * omega_h * inp.w_h;
  const double p_d = inp.s_b * noise * omega_h * inp.w_total() / nn;

  const double r_m = inp.w_m / (nn - 1.0) * inp.env.cap_log(inp.s_h);
  const double r_ch = inp.w_h * inp.env.cap_log(inp.s_b);
  const double r_d = inp.w_total() / nn * inp.env.cap_log(inp.s_b);

  const auto& pw = inp.power;
  const double p_listen = pw.p_c;  // special-case assumption P_l = P_c
  const double e_h_c = pw.e_s_h + inp.m_factor() * payload * (pw.p_c + pw.xi * p_h) / r_ch +
                       payload * p_listen * (nn - 1.0) / r_m;
  const double e_m_c = pw.e_s + payload * (pw.p_c + pw.xi * p_m) / r_m;
  const double e_h_d = pw.e_s_d + payload * (pw.p_c + pw.xi * p_d) / r_d;

  RegionLifetimes out;
  out.l_c = inp.e0 * inp.t_c / (e_h_c / nn + (nn - 1.0) / nn * e_m_c);
  out.l_d = inp.e0 * inp.t_c / e_h_d;
  return out;
}

}  // namespace

FeasibilityResult clustering_feasibility(const FeasibilityInputs& inp) {
  FeasibilityResult res;
  if (inp.n < 2) {
    // nothing to aggregate
    res.feasible = false;
    if (inp.n == 1) {
      const auto l = region_lifetimes(inp, inp.traffic.d_i);
      res.l_c = l.l_c;
      res.l_d = l.l_d;
    }
    return res;
  }
  const auto l = region_lifetimes(inp, inp.traffic.d_i);
  res.l_c = l.l_c;
  res.l_d = l.l_d;
  res.feasible = l.l_c > l.l_d;

  const double nn = static_cast<double>(inp.n);
  const double m = inp.m_factor();
  if (std::abs(nn - m) > 1e-12) {
    const double r_bar = mean_pairwise_distance_disc(inp.r);
    const double omega_m = inp.env.pl_intra.loss_linear(r_bar);
    const double payload = inp.traffic.d_i;
    res.threshold_omega =
        inp.s_bar(inp.s_h) * (nn - 1.0) / (inp.s_bar(inp.s_b) * (nn - m)) * omega_m +
        (inp.power.p_c * inp.q_factor() * payload - inp.e0_composite()) /
            (inp.s_bar(inp.s_b) * inp.env.gamma_gap * inp.env.n0 * payload * inp.power.xi *
             (nn - m));
    // the closed threshold and the direct comparison must agree away from the
    // boundary
    const double omega_h = inp.env.pl_inter.loss_linear(inp.big_r);
    const bool by_threshold = omega_h > *res.threshold_omega;
    if (by_threshold != res.feasible &&
        std::abs(omega_h - *res.threshold_omega) > 1e-9 * omega_h)
      throw std::logic_error("clustering_feasibility: threshold disagrees with comparison");
  }
  return res;
}

double crossover_payload(const FeasibilityInputs& inp) {
  if (inp.n < 2) throw std::domain_error("crossover_payload: need n >= 2");
  auto gap = [&](double payload) {
    const auto l = region_lifetimes(inp, payload);
    return l.l_c - l.l_d;
  };

  double lo = 1.0, hi = 1.0;
  const double g_lo = gap(lo);
  if (g_lo <= 0.0) throw std::domain_error("crossover_payload: clustering infeasible at 1 bit");
  while (gap(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e15) throw std::domain_error("crossover_payload: no crossover found");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-9) break;
  }
  return 0.5 * (lo + hi);
}

ClusterLifetimeFn make_lifetime_objective(ClusterModel tmpl, PowerProfile power,
                                          TrafficProfile traffic, RadioEnvironment env,
                                          double d_h, RateFn rate_m, RateFn rate_h) {
  return [=](double z) {
    ClusterModel c = tmpl;
    c.z = z;
    return cluster_lifetime(c, power, traffic, env, d_h, rate_m, rate_h);
  };
}

ClusterLifetimeFn make_contention_lifetime_objective(ClusterModel tmpl, PowerProfile power,
                                                     TrafficProfile traffic,
                                                     RadioEnvironment env, double d_h,
                                                     ContentionSchedule sched,
                                                     double e_s_h_lump) {
  return [=](double z) {
    ClusterModel c = tmpl;
    c.z = z;
    PowerProfile pw = power;
    pw.e_s = traffic.r_g * c.t_c * power.p_c * sched.theta_b(z);
    pw.e_s_h = power.p_c * sched.t_intra(z) + e_s_h_lump;

    const double d_m = mean_member_distance(z, c.sigma);
    const double omega_m = env.pl_intra.loss_linear(d_m);
    const double link = dedicated_rate(env, env.w_m, power.p_t_m, omega_m);
    if (link <= 0.0) throw std::domain_error("contention objective: nonpositive link rate");

    CsmaParams cs;
    cs.g = sched.in_window_load(z, traffic.r_g, c.t_c);
    cs.tau_p = traffic.d_i / link;
    cs.delta_d = sched.delta_d;
    const double p_is = channel_probabilities(cs).p_is;

    RateFn rm = make_csma_effective(p_is, traffic.r_g, c.t_c);
    RateFn rh = make_dedicated();
    return cluster_lifetime(c, pw, traffic, env, d_h, rm, rh);
  };
}

ClusterSizeResult optimal_cluster_size(const ClusterLifetimeFn& objective, long z_min,
                                       long z_max, std::vector<long>* excluded) {
  if (z_min < 1 || z_max < z_min) throw std::domain_error("optimal_cluster_size: bad bounds");

  auto value = [&](long z) -> double {
    try {
      const double v = objective(static_cast<double>(z));
      if (std::isfinite(v) && v > 0.0) return v;
    } catch (const std::exception&) {
    }
    if (excluded) excluded->push_back(z);  // infeasible z excluded from the search
    return -1.0;
  };

  long lo = z_min, hi = z_max;
  while (hi - lo > 4) {
    const long m1 = lo + (hi - lo) / 3;
    const long m2 = hi - (hi - lo) / 3;
    if (value(m1) < value(m2))
      lo = m1 + 1;
    else
      hi = m2 - 1;
  }

  ClusterSizeResult best;
  best.lifetime = -1.0;
  auto consider = [&](long z) {
    if (z < z_min || z > z_max) return;
    const double v = value(z);
    if (v > best.lifetime) {
      best.lifetime = v;
      best.z_star = z;
    }
  };
  for (long z = lo; z <= hi; ++z) consider(z);
  for (long dz = -2; dz <= 2; ++dz) consider(best.z_star + dz);
  if (best.lifetime <= 0.0)
    throw std::domain_error("optimal_cluster_size: no feasible cluster size in range");
  return best;
}

}  // namespace e2mac
