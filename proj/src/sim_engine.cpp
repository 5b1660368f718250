#include "e2mac/sim_engine.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <stdexcept>

namespace e2mac::sim {

std::string variant_name(MacVariant v) {
  switch (v) {
    case MacVariant::e2mac: return "e2mac";
    case MacVariant::e2mac_n: return "e2mac-n";
    case MacVariant::e2mac_r: return "e2mac-r";
    case MacVariant::cmac: return "cmac";
  }
  return "?";
}

void SimConfig::validate() const {
  auto fail = [](const char* field) {
    throw std::invalid_argument(std::string("sim config: invalid field ") + field);
  };
  if (r_inner < 0.0 || r_outer <= r_inner) fail("r_inner/r_outer");
  if (n_devices <= 0.0) fail("n_devices");
  if (t_ra <= 0.0) fail("t_ra");
  if (intra_window <= 0.0 || inter_window < 0.0) fail("intra_window/inter_window");
  if (intra_window + inter_window > t_ra) fail("resource windows exceed t_ra");
  if (n_bunches < 1) fail("n_bunches");
  if (n_phases < 1) fail("n_phases");
  if (cluster_size < 1.0) fail("cluster_size");
  if (k_max_attempts < 1) fail("k_max_attempts");
  if (preambles < 1) fail("preambles");
  if (e0 <= 0.0) fail("e0");
  if (e_ref < 0.0) fail("e_ref");
  if (traffic.r_g <= 0.0 || traffic.d_i <= 0.0) fail("traffic");
  if (!reselect.on_death && reselect.period_cycles < 1) fail("reselect.period_cycles");
}

namespace {

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Packet {
  double arrival = 0.0;
  int origin = -1;
};

struct Node {
  int id = -1;
  Vec2 pos;
  double energy = 0.0;
  bool alive = true;
  int cluster = -1;  // slot into the cluster table, -1 = direct
  std::mt19937_64 rng;
  double next_arrival = 0.0;
  std::deque<Packet> queue;
  int attempts = 0;
  int preamble_slot = 0;
  double airtime_intra = 0.0;   // to the serving CH
  double airtime_direct = 0.0;  // to the BS
  double active_time = 0.0;     // charged awake time within the cycle
};

struct ClusterRt {
  int ch = -1;  // device id, -1 = orphaned
  std::vector<int> members;
  ClusterEnergyModel matrix;
  bool matrix_valid = false;
  std::vector<Packet> relay;  // intra-delivered packets awaiting forwarding
  double r_h = 0.0;           // cached CH->BS rate
};

struct Engine {
  const SimConfig& cfg;
  SimOutcome out;
  std::vector<Node> nodes;
  std::vector<ClusterRt> clusters;
  std::vector<EnergyLedger> ledgers;
  double t_intra = 0.0;  // per-cluster window length
  long cycle = 0;

  explicit Engine(const SimConfig& c) : cfg(c) {}

  void log(double t, int dev, EventKind k, double a = 0.0, double b = 0.0, int aux = 0) {
    if (!cfg.event_log) return;
    out.events.push_back({t, dev, k, dev >= 0 ? nodes[dev].energy : 0.0, a, b, aux});
  }

  // Charges `amount` accrued uniformly over [t_from, t_to]. Returns false when
  // the node dies part-way; the partial spend keeps the ledger exact.
  bool charge(Node& n, double amount, double t_from, double t_to) {
    if (!n.alive || amount <= 0.0) return n.alive;
    auto& ledger = ledgers[n.id];
    n.active_time += std::max(0.0, t_to - t_from);
    if (n.energy >= amount) {
      n.energy -= amount;
      ledger.spent += amount;
      return true;
    }
    const double frac = amount > 0.0 ? n.energy / amount : 0.0;
    const double t_die = t_from + frac * std::max(0.0, t_to - t_from);
    ledger.spent += n.energy;
    n.energy = 0.0;
    n.alive = false;
    out.death_times[n.id] = t_die;
    log(t_die, n.id, EventKind::die);
    if (n.cluster >= 0) {
      auto& cl = clusters[n.cluster];
      if (cl.ch == n.id) cl.ch = -1;
      cl.matrix_valid = false;
    }
    return false;
  }

  double exp_draw(Node& n, double mean) {
    std::exponential_distribution<double> d(1.0 / std::max(mean, 1e-300));
    return d(n.rng);
  }

  void generate_arrivals(double until) {
    for (auto& n : nodes) {
      if (!n.alive) continue;
      while (n.next_arrival < until) {
        n.queue.push_back({n.next_arrival, n.id});
        n.next_arrival += exp_draw(n, 1.0 / cfg.traffic.r_g);
      }
    }
  }

  double member_rate(const Node& m, const Node& head) const {
    const double d = std::max(distance(m.pos, head.pos), 0.1);
    return dedicated_rate(cfg.env, cfg.env.w_m, cfg.power.p_t_m,
                          cfg.env.pl_intra.loss_linear(d));
  }

  double direct_rate(const Node& n) const {
    const double d = std::max(std::hypot(n.pos.x, n.pos.y), 1.0);
    return dedicated_rate(cfg.env, cfg.env.w_h, cfg.power.p_t_d,
                          cfg.env.pl_inter.loss_linear(d));
  }

  double head_rate(const Node& n) const {
    const double d = std::max(std::hypot(n.pos.x, n.pos.y), 1.0);
    return dedicated_rate(cfg.env, cfg.env.w_h, cfg.power.p_t_h,
                          cfg.env.pl_inter.loss_linear(d));
  }

  void refresh_cluster_links(ClusterRt& cl) {
    if (cl.ch < 0) return;
    cl.r_h = head_rate(nodes[cl.ch]);
    for (int id : cl.members) {
      auto& n = nodes[id];
      if (id == cl.ch) continue;
      n.airtime_intra = cfg.traffic.d_i / member_rate(n, nodes[cl.ch]);
    }
  }

  void rebuild_matrix(ClusterRt& cl) {
    std::vector<DeviceState> members;
    for (int id : cl.members) {
      if (!nodes[id].alive) continue;
      DeviceState d;
      d.id = id;
      d.position = nodes[id].pos;
      d.energy = nodes[id].energy;
      d.traffic = cfg.traffic;
      members.push_back(d);
    }
    if (members.empty()) {
      cl.matrix_valid = false;
      return;
    }
    ClusterModel cm;
    cm.z = cfg.cluster_size;
    cm.lambda = cfg.lambda;
    cm.t_c = cfg.t_ra;
    cm.sigma = cfg.n_devices / (std::numbers::pi *
                                (cfg.r_outer * cfg.r_outer - cfg.r_inner * cfg.r_inner));
    cm.n_t = cfg.n_devices;
    auto ctx = ChCandidateContext::build(std::move(members), {0.0, 0.0}, cfg.t_ra, cfg.env,
                                         cfg.power, cm);
    ctx.rate_m = make_dedicated();
    ctx.rate_h = make_dedicated();
    cl.matrix = ClusterEnergyModel::build(ctx);
    cl.matrix_valid = true;
  }

  void reselect_cluster(ClusterRt& cl) {
    if (!cl.matrix_valid) rebuild_matrix(cl);
    if (!cl.matrix_valid) return;  // everyone dead
    std::map<int, double> energies;
    for (int id : cl.matrix.ids) energies[id] = nodes[id].energy;
    const int chosen = cl.matrix.select(energies).ch_id;
    if (chosen != cl.ch) {
      cl.ch = chosen;
      refresh_cluster_links(cl);
    }
  }

  // Re-attach every alive CM to its nearest alive CH; each rejoining device
  // pays e_ref. Memberships and matrices refresh afterwards.
  void reform_clusters(double t_now) {
    std::vector<int> head_ids;
    for (const auto& cl : clusters)
      if (cl.ch >= 0 && nodes[cl.ch].alive) head_ids.push_back(cl.ch);
    if (head_ids.empty()) return;

    std::vector<std::vector<int>> fresh(clusters.size());
    std::vector<int> head_slot(nodes.size(), -1);
    for (std::size_t s = 0; s < clusters.size(); ++s)
      if (clusters[s].ch >= 0) head_slot[clusters[s].ch] = static_cast<int>(s);

    for (auto& n : nodes) {
      if (!n.alive || n.cluster < 0) continue;
      if (head_slot[n.id] >= 0) {
        fresh[head_slot[n.id]].push_back(n.id);
        continue;
      }
      int best = -1;
      double best_d = 0.0;
      for (int h : head_ids) {
        const double d = distance(n.pos, nodes[h].pos);
        if (best < 0 || d < best_d || (d == best_d && h < best)) {
          best = h;
          best_d = d;
        }
      }
      charge(n, cfg.e_ref, t_now, t_now);
      if (!n.alive) continue;
      fresh[head_slot[best]].push_back(n.id);
    }

    for (std::size_t s = 0; s < clusters.size(); ++s) {
      auto& cl = clusters[s];
      if (cl.ch < 0) {
        // orphaned cluster: survivors were reassigned; drop its pending relay
        out.dropped += cl.relay.size();
        cl.relay.clear();
        cl.members.clear();
        cl.matrix_valid = false;
        continue;
      }
      if (fresh[s] != cl.members) {
        cl.members = std::move(fresh[s]);
        cl.matrix_valid = false;
        for (int id : cl.members) nodes[id].cluster = static_cast<int>(s);
        refresh_cluster_links(cl);
      }
    }
  }

  // ---- intra-cluster contention -------------------------------------------

  struct BurstPart {
    int id;
    double end;
  };

  void run_phase(ClusterRt& cl, double ps, double pe, const std::vector<int>& contenders,
                 int phase_tag) {
    struct Wake {
      double t;
      int id;
      bool operator>(const Wake& o) const { return t > o.t || (t == o.t && id > o.id); }
    };
    std::priority_queue<Wake, std::vector<Wake>, std::greater<Wake>> q;
    std::vector<double> listen_from(nodes.size(), 0.0);

    auto begin_backoff = [&](Node& n, double from, double mean) {
      listen_from[n.id] = from;
      q.push({from + exp_draw(n, mean), n.id});
    };

    for (int id : contenders) {
      auto& n = nodes[id];
      if (!n.alive || n.queue.empty()) continue;
      const double s = std::max(ps, n.queue.front().arrival);
      if (s >= pe) continue;
      begin_backoff(n, s, cl_theta_b());
    }

    double burst_start = -1.0, burst_air_end = -1.0, residual_air_end = -1.0;
    std::vector<BurstPart> parts;

    auto close_burst = [&] {
      if (burst_start < 0.0) return;
      const bool clean = parts.size() == 1;
      for (const auto& part : parts) {
        auto& n = nodes[part.id];
        if (!n.alive) continue;
        if (clean) {
          Packet pkt = n.queue.front();
          n.queue.pop_front();
          n.attempts = 0;
          cl.relay.push_back(pkt);
          log(part.end, n.id, EventKind::deliver, burst_start, 0.0, phase_tag);
        } else {
          log(part.end, n.id, EventKind::collide, burst_start, 0.0, phase_tag);
          if (++n.attempts > cfg.k_max_attempts) {
            n.queue.pop_front();
            n.attempts = 0;
            ++out.dropped;
            log(part.end, n.id, EventKind::drop);
          }
        }
        if (!n.queue.empty() && n.queue.front().arrival < pe && part.end < pe)
          begin_backoff(n, part.end, clean ? cl_theta_b() : cl_theta_f());
      }
      residual_air_end = burst_air_end;
      burst_start = burst_air_end = -1.0;
      parts.clear();
    };

    while (!q.empty() || burst_start >= 0.0) {
      if (q.empty()) {
        close_burst();
        continue;
      }
      const Wake w = q.top();
      if (burst_start >= 0.0 && w.t >= burst_air_end) {
        close_burst();
        continue;
      }
      q.pop();
      auto& n = nodes[w.id];
      if (!n.alive) continue;

      const double listened = std::min(w.t, pe) - listen_from[n.id];
      if (!charge(n, cfg.power.p_l * listened, listen_from[n.id], std::min(w.t, pe))) continue;

      if (w.t >= pe) {
        log(pe, n.id, EventKind::defer, 0.0, 0.0, phase_tag);
        continue;  // sleeps; packet carries to the next cycle
      }

      const bool vulnerable = burst_start >= 0.0 && w.t < burst_start + cl_delta_d();
      const bool busy = (burst_start >= 0.0 && w.t < burst_air_end && !vulnerable) ||
                        (burst_start < 0.0 && w.t < residual_air_end);

      if (busy) {
        log(w.t, n.id, EventKind::busy, 0.0, 0.0, phase_tag);
        if (++n.attempts > cfg.k_max_attempts) {
          n.queue.pop_front();
          n.attempts = 0;
          ++out.dropped;
          log(w.t, n.id, EventKind::drop);
          if (n.queue.empty() || n.queue.front().arrival >= pe) continue;
        }
        begin_backoff(n, w.t, cl_theta_b());
        continue;
      }

      // senses idle: either joins the vulnerable window or starts a burst
      if (w.t + n.airtime_intra > pe) {
        log(w.t, n.id, EventKind::defer, 0.0, 0.0, phase_tag);
        continue;
      }
      const double end = w.t + n.airtime_intra;
      charge(n, (cfg.power.p_c + cfg.power.xi * cfg.power.p_t_m) * n.airtime_intra, w.t, end);
      log(w.t, n.id, EventKind::tx_start, end, pe, phase_tag);
      if (vulnerable) {
        parts.push_back({n.id, end});
        burst_air_end = std::max(burst_air_end, end);
      } else {
        burst_start = w.t;
        burst_air_end = end;
        parts.assign(1, {n.id, end});
      }
    }
  }

  // theta_b = theta_f = T_intra / (divisor * n)
  double cl_theta_b() const {
    return cfg.sched.t_intra(cfg.cluster_size) / (cfg.sched.backoff_divisor * cfg.n_phases);
  }
  double cl_theta_f() const { return cl_theta_b(); }
  double cl_delta_d() const { return cfg.sched.delta_d; }

  // ---- per-cycle drivers ---------------------------------------------------

  void e2mac_cycle(double t0) {
    const bool pass_due = !cfg.reselect.on_death && cfg.variant != MacVariant::e2mac_n &&
                          (cycle % cfg.reselect.period_cycles == 0);
    bool any_change = false;
    for (auto& cl : clusters) {
      const int before = cl.ch;
      if (pass_due || cl.ch < 0) reselect_cluster(cl);
      if (cl.ch != before) {
        any_change = true;
        if (cfg.e_select > 0.0)
          for (int id : cl.members)
            if (id != cl.ch && nodes[id].alive) charge(nodes[id], cfg.e_select, t0, t0);
      }
    }
    if (cfg.variant == MacVariant::e2mac_r && any_change) reform_clusters(t0);

    if (cfg.power.e_s > 0.0) {
      for (auto& n : nodes) {
        if (!n.alive || n.cluster < 0) continue;
        if (clusters[n.cluster].ch == n.id) continue;  // heads pay e_s_h instead
        charge(n, cfg.power.e_s, t0, t0);
      }
    }

    // intra windows: clusters dealt round-robin into bunches, serialized
    // inside each bunch
    const double bunch_len = cfg.intra_window / cfg.n_bunches;
    std::vector<int> bunch_fill(cfg.n_bunches, 0);
    for (std::size_t s = 0; s < clusters.size(); ++s) {
      auto& cl = clusters[s];
      if (cl.ch < 0 || cl.members.empty()) continue;
      const int bunch = static_cast<int>(s) % cfg.n_bunches;
      const int slot_in_bunch = bunch_fill[bunch]++;
      double offset = slot_in_bunch * t_intra;
      if (offset + t_intra > bunch_len) offset = 0.0;  // spatial reuse fallback
      const double win0 = t0 + bunch * bunch_len + offset;

      auto& head = nodes[cl.ch];
      log(win0, cl.ch, EventKind::window, win0 + t_intra, 0.0, bunch);
      if (!charge(head, cfg.power.e_s_h, win0, win0)) continue;
      if (!charge(head, cfg.power.p_l * t_intra, win0, win0 + t_intra)) continue;

      // phase assignment: alive CMs sorted by id, dealt round-robin
      std::vector<int> cms;
      for (int id : cl.members)
        if (id != cl.ch && nodes[id].alive) cms.push_back(id);
      std::sort(cms.begin(), cms.end());
      const double phase_len = t_intra / cfg.n_phases;
      for (int p = 0; p < cfg.n_phases; ++p) {
        std::vector<int> group;
        for (std::size_t i = p; i < cms.size(); i += cfg.n_phases) group.push_back(cms[i]);
        if (group.empty()) continue;
        run_phase(cl, win0 + p * phase_len, win0 + (p + 1) * phase_len, group, p);
      }
    }

    // inter window: reserved sequential forwarding over the shared uplink
    const double ti0 = t0 + cfg.intra_window;
    const double tie = ti0 + cfg.inter_window;
    double cursor = ti0;
    for (auto& cl : clusters) {
      if (cl.ch < 0) continue;
      auto& head = nodes[cl.ch];
      if (!head.alive) continue;
      // the CH's own packets join the aggregate directly
      while (!head.queue.empty() && head.queue.front().arrival <= ti0) {
        cl.relay.push_back(head.queue.front());
        head.queue.pop_front();
      }
      while (!cl.relay.empty() && cursor < tie) {
        const Packet pkt = cl.relay.front();
        const double scale = pkt.origin == cl.ch ? 1.0 : cfg.lambda;
        const double dur = scale * cfg.traffic.d_i / cl.r_h;
        if (cursor + dur > tie) break;
        if (!charge(head, (cfg.power.p_c + cfg.power.xi * cfg.power.p_t_h) * dur, cursor,
                    cursor + dur)) {
          out.dropped += cl.relay.size();
          cl.relay.clear();
          break;
        }
        cl.relay.erase(cl.relay.begin());
        cursor += dur;
        out.packet_delays.push_back(cursor - pkt.arrival);
        ++out.delivered;
        log(cursor, pkt.origin, EventKind::deliver, cursor - pkt.arrival, 0.0, -1);
      }
    }
  }

  void cmac_cycle(double t0) {
    for (auto& n : nodes) {
      if (!n.alive) continue;
      charge(n, cfg.power.e_s_d, t0, t0);
    }
    const int n_opp =
        static_cast<int>(std::floor((cfg.intra_window + cfg.inter_window) / cfg.preamble_period));
    const double pre_energy =
        (cfg.power.p_c + cfg.power.xi * cfg.power.p_t_d) * cfg.preamble_time +
        cfg.power.p_l * cfg.rar_listen;
    std::vector<int> slot_owner(cfg.preambles, -1);
    std::vector<int> picks;
    for (int k = 0; k < n_opp; ++k) {
      const double t = t0 + k * cfg.preamble_period;
      std::fill(slot_owner.begin(), slot_owner.end(), -1);
      picks.clear();
      bool any = false;
      for (auto& n : nodes) {
        if (!n.alive || n.queue.empty() || n.queue.front().arrival > t) continue;
        std::uniform_int_distribution<int> pick(0, cfg.preambles - 1);
        const int pre = pick(n.rng);
        if (!charge(n, pre_energy, t, t + cfg.preamble_time + cfg.rar_listen)) continue;
        any = true;
        picks.push_back(n.id);
        slot_owner[pre] = slot_owner[pre] == -1 ? n.id : -2;  // -2 = collision
        n.preamble_slot = pre;
      }
      if (!any) continue;
      for (int id : picks) {
        auto& n = nodes[id];
        if (!n.alive) continue;
        if (slot_owner[n.preamble_slot] == id) {
          const double start = t + cfg.grant_offset;
          const double end = start + n.airtime_direct;
          if (!charge(n, (cfg.power.p_c + cfg.power.xi * cfg.power.p_t_d) * n.airtime_direct,
                      start, end))
            continue;
          const Packet pkt = n.queue.front();
          n.queue.pop_front();
          n.attempts = 0;
          out.packet_delays.push_back(end - pkt.arrival);
          ++out.delivered;
          log(end, n.id, EventKind::deliver, end - pkt.arrival, 0.0, -1);
        } else {
          log(t, n.id, EventKind::collide);
          if (++n.attempts > cfg.k_max_attempts) {
            n.queue.pop_front();
            n.attempts = 0;
            ++out.dropped;
            log(t, n.id, EventKind::drop);
          }
        }
      }
    }
  }

  // ---- top level -----------------------------------------------------------

  SimOutcome run() {
    cfg.validate();
    const double sigma =
        cfg.n_devices /
        (std::numbers::pi * (cfg.r_outer * cfg.r_outer - cfg.r_inner * cfg.r_inner));
    auto devices = deploy_ppp(sigma, cfg.r_inner, cfg.r_outer, cfg.seed);
    if (devices.empty()) throw std::runtime_error("run_sim: empty deployment");

    t_intra = cfg.sched.t_intra(cfg.cluster_size);

    nodes.resize(devices.size());
    ledgers.assign(devices.size(), {});
    for (std::size_t i = 0; i < devices.size(); ++i) {
      auto& n = nodes[i];
      n.id = devices[i].id;
      n.pos = devices[i].position;
      n.energy = cfg.e0;
      n.rng.seed(mix64(cfg.seed ^ mix64(n.id + 1)));
      n.next_arrival = exp_draw(n, 1.0 / cfg.traffic.r_g);
      n.airtime_direct = cfg.traffic.d_i / direct_rate(n);
      ledgers[n.id] = {cfg.e0, 0.0, 0.0};
    }

    if (cfg.variant != MacVariant::cmac) {
      // broadcast-count formation: round(N/z) announced heads, nearest-head join
      const int n_heads = std::max(
          1, static_cast<int>(std::llround(devices.size() / cfg.cluster_size)));
      auto assignments = form_voronoi_clusters_fixed(devices, n_heads, mix64(cfg.seed + 17));
      clusters.resize(assignments.size());
      for (std::size_t s = 0; s < assignments.size(); ++s) {
        auto& cl = clusters[s];
        cl.ch = assignments[s].ch_id;
        cl.members = assignments[s].member_ids;
        cl.members.push_back(assignments[s].ch_id);
        std::sort(cl.members.begin(), cl.members.end());
        for (int id : cl.members) nodes[id].cluster = static_cast<int>(s);
        refresh_cluster_links(cl);
      }
    }

    long alive = static_cast<long>(nodes.size());
    for (cycle = 0; cycle < cfg.max_cycles; ++cycle) {
      alive = 0;
      double residual = 0.0;
      for (const auto& n : nodes) {
        if (n.alive) ++alive;
        residual += n.energy;
      }
      if (alive == 0) break;
      const double t0 = cycle * cfg.t_ra;
      out.energy_trace.emplace_back(t0, residual);
      generate_arrivals(t0 + cfg.t_ra);

      if (cfg.variant == MacVariant::cmac)
        cmac_cycle(t0);
      else
        e2mac_cycle(t0);

      // sleep drain over the remainder of the cycle
      if (cfg.power.p_s > 0.0) {
        for (auto& n : nodes) {
          if (!n.alive) continue;
          const double asleep = std::max(0.0, cfg.t_ra - n.active_time);
          charge(n, cfg.power.p_s * asleep, t0 + cfg.t_ra - asleep, t0 + cfg.t_ra);
        }
      }
      for (auto& n : nodes) n.active_time = 0.0;
    }
    if (alive > 0)
      throw std::runtime_error("run_sim: max_cycles reached before all nodes died");

    for (const auto& n : nodes) {
      ledgers[n.id].residual = n.energy;
      out.ledgers[n.id] = ledgers[n.id];
    }
    double fed = std::numeric_limits<double>::max(), last = 0.0;
    for (const auto& [id, t] : out.death_times) {
      fed = std::min(fed, t);
      last = std::max(last, t);
    }
    out.fed = fed;
    out.last_death = last;
    out.per_variant_label =
        "(" + std::to_string(cfg.n_phases) + "," +
        std::to_string(static_cast<long>(cfg.cluster_size)) + ")" + variant_name(cfg.variant);
    return std::move(out);
  }
};

}  // namespace

SimOutcome run_sim(const SimConfig& cfg) {
  Engine eng(cfg);
  return eng.run();
}

std::vector<std::pair<double, double>> lifetime_cdf(const SimOutcome& outcome) {
  std::vector<double> times;
  times.reserve(outcome.death_times.size());
  for (const auto& [id, t] : outcome.death_times) times.push_back(t);
  std::sort(times.begin(), times.end());
  std::vector<std::pair<double, double>> cdf;
  const double n = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!cdf.empty() && cdf.back().first == times[i])
      cdf.back().second = (i + 1) / n;
    else
      cdf.emplace_back(times[i], (i + 1) / n);
  }
  return cdf;
}

std::vector<std::pair<double, double>> delay_cdf(const SimOutcome& outcome) {
  std::vector<double> delays = outcome.packet_delays;
  std::sort(delays.begin(), delays.end());
  std::vector<std::pair<double, double>> cdf;
  const double n = static_cast<double>(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i) {
    if (!cdf.empty() && cdf.back().first == delays[i])
      cdf.back().second = (i + 1) / n;
    else
      cdf.emplace_back(delays[i], (i + 1) / n);
  }
  return cdf;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double idx = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double w = idx - lo;
  return values[lo] * (1.0 - w) + values[hi] * w;
}

std::vector<VariantSummary> compare_variants(const std::vector<SimConfig>& cfgs,
                                             const std::vector<std::uint64_t>& seeds,
                                             int jobs) {
  const int total = static_cast<int>(cfgs.size() * seeds.size());
  std::vector<VariantSummary> rows(total);
  if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int idx = 0; idx < total; ++idx) {
    const auto& base = cfgs[idx / seeds.size()];
    SimConfig cfg = base;
    cfg.seed = seeds[idx % seeds.size()];
    const auto outcome = run_sim(cfg);
    VariantSummary row;
    row.variant = outcome.per_variant_label;
    row.seed = cfg.seed;
    row.fed_s = outcome.fed;
    row.last_death_s = outcome.last_death;
    row.delay_p50_s = percentile(outcome.packet_delays, 0.5);
    row.delay_max_s = outcome.packet_delays.empty()
                          ? 0.0
                          : *std::max_element(outcome.packet_delays.begin(),
                                              outcome.packet_delays.end());
    rows[idx] = row;
  }
  return rows;
}

}  // namespace e2mac::sim
