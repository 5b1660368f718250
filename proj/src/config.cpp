#include "e2mac/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace e2mac {

namespace {

using nlohmann::json;

double get_num(const json& j, const std::string& section, const std::string& key,
               double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) throw config_error("config: missing field " + section + "." + key);
    return fallback;
  }
  if (!j[key].is_number())
    throw config_error("config: field " + section + "." + key + " must be a number");
  return j[key].get<double>();
}

PathLossModel get_pl(const json& j, const std::string& section, const PathLossModel& fallback) {
  PathLossModel m = fallback;
  m.intercept_db = get_num(j, section, "intercept_db", m.intercept_db);
  m.slope_db_per_decade = get_num(j, section, "slope_db_per_decade", m.slope_db_per_decade);
  m.reference_distance_m = get_num(j, section, "reference_distance_m", m.reference_distance_m);
  return m;
}

}  // namespace

AppConfig parse_config(const std::string& text, const std::string& path) {
  AppConfig cfg;
  cfg.raw_bytes = text;
  cfg.path = path;
  try {
    cfg.raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error("config: parse failure in " + path + ": " + e.what());
  }
  const json& root = cfg.raw;

  if (root.contains("radio")) {
    const json& r = root["radio"];
    cfg.env.w_m = get_num(r, "radio", "w_m_hz", cfg.env.w_m);
    cfg.env.w_h = get_num(r, "radio", "w_h_hz", cfg.env.w_h);
    cfg.env.n0 = std::pow(10.0, get_num(r, "radio", "n0_dbw_per_hz", -204.0) / 10.0);
    cfg.env.gamma_gap = std::pow(10.0, get_num(r, "radio", "gamma_db", 13.0) / 10.0);
    if (r.contains("log_base")) {
      const std::string base = r["log_base"].get<std::string>();
      if (base == "base2")
        cfg.env.log_base = LogBase::base2;
      else if (base == "natural")
        cfg.env.log_base = LogBase::natural;
      else
        throw config_error("config: radio.log_base must be base2 or natural");
    }
    if (r.contains("pl_inter")) cfg.env.pl_inter = get_pl(r["pl_inter"], "radio.pl_inter", cfg.env.pl_inter);
    if (r.contains("pl_intra")) cfg.env.pl_intra = get_pl(r["pl_intra"], "radio.pl_intra", cfg.env.pl_intra);
  }

  if (root.contains("power")) {
    const json& p = root["power"];
    cfg.power.p_c = get_num(p, "power", "p_c_w", cfg.power.p_c);
    cfg.power.p_s = get_num(p, "power", "p_s_w", cfg.power.p_s);
    cfg.power.p_l = get_num(p, "power", "p_l_w", cfg.power.p_l);
    cfg.power.p_t_m = get_num(p, "power", "p_t_m_w", cfg.power.p_t_m);
    cfg.power.p_t_h = get_num(p, "power", "p_t_h_w", cfg.power.p_t_h);
    cfg.power.p_t_d = get_num(p, "power", "p_t_d_w", cfg.power.p_t_d);
    cfg.power.xi = get_num(p, "power", "xi", cfg.power.xi);
    cfg.power.e_s = get_num(p, "power", "e_s_j", cfg.power.e_s);
    cfg.power.e_s_h = get_num(p, "power", "e_s_h_j", cfg.power.e_s_h);
    cfg.power.e_s_d = get_num(p, "power", "e_s_d_j", cfg.power.e_s_d);
    cfg.power.t_a = get_num(p, "power", "t_a_s", cfg.power.t_a);
  }

  if (root.contains("traffic")) {
    const json& t = root["traffic"];
    cfg.traffic.t_i = get_num(t, "traffic", "t_i_s", cfg.traffic.t_i);
    cfg.traffic.d_i = get_num(t, "traffic", "d_i_bits", cfg.traffic.d_i);
    cfg.traffic.r_g = 1.0 / cfg.traffic.t_i;
    cfg.traffic.r_g = get_num(t, "traffic", "r_g_per_s", cfg.traffic.r_g);
  }

  if (root.contains("cell")) {
    const json& c = root["cell"];
    cfg.r_inner = get_num(c, "cell", "r_inner_m", cfg.r_inner);
    cfg.r_outer = get_num(c, "cell", "r_outer_m", cfg.r_outer);
    if (cfg.r_inner < 0.0 || cfg.r_outer <= cfg.r_inner)
      throw config_error("config: cell radii must satisfy 0 <= r_inner < r_outer");
  }

  if (root.contains("cluster")) {
    const json& c = root["cluster"];
    cfg.cluster.z = get_num(c, "cluster", "z", cfg.cluster.z);
    cfg.cluster.lambda = get_num(c, "cluster", "lambda", cfg.cluster.lambda);
    cfg.cluster.t_c = get_num(c, "cluster", "t_c_s", cfg.cluster.t_c);
    cfg.cluster.e0 = get_num(c, "cluster", "e0_j", cfg.cluster.e0);
    cfg.cluster.n_t = get_num(c, "cluster", "n_t", cfg.cluster.n_t);
    const double area =
        std::numbers::pi * (cfg.r_outer * cfg.r_outer - cfg.r_inner * cfg.r_inner);
    cfg.cluster.sigma = get_num(c, "cluster", "sigma_per_m2", cfg.cluster.n_t / area);
  }

  if (root.contains("schedule")) {
    const json& s = root["schedule"];
    cfg.sched.t_intra_per_member = get_num(s, "schedule", "t_intra_per_member_s",
                                           cfg.sched.t_intra_per_member);
    cfg.sched.t_intra_cap = get_num(s, "schedule", "t_intra_cap_s", cfg.sched.t_intra_cap);
    cfg.sched.backoff_divisor = get_num(s, "schedule", "backoff_divisor",
                                        cfg.sched.backoff_divisor);
    cfg.sched.delta_d = get_num(s, "schedule", "delta_d_s", cfg.sched.delta_d);
  }

  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

CsmaSweepSpec make_csma_sweep(const AppConfig& cfg) {
  CsmaSweepSpec spec;
  if (!cfg.raw.contains("csma")) throw config_error("config: missing section csma");
  const auto& c = cfg.raw["csma"];
  spec.base.tau_p = get_num(c, "csma", "tau_p_s", 1.0, true);
  spec.base.delta_d = get_num(c, "csma", "delta_d_s", 0.0);
  spec.base.delta = get_num(c, "csma", "delta_s", 0.0);
  spec.base.theta_b = get_num(c, "csma", "theta_b_s", 0.0);
  spec.base.theta_f = get_num(c, "csma", "theta_f_s", 0.0);
  spec.base.tau_r = get_num(c, "csma", "tau_r_s", 0.0);
  spec.base.k_m = static_cast<int>(get_num(c, "csma", "k_m", 50));
  spec.base.d_tilde = get_num(c, "csma", "d_tilde_bits", 5.0);
  if (c.contains("e_s_j")) {
    spec.base.e_s = get_num(c, "csma", "e_s_j", 0.0);
    spec.base.e_f = get_num(c, "csma", "e_f_j", 0.0);
    spec.base.e_b = get_num(c, "csma", "e_b_j", 0.0);
  } else {
    spec.base.p_l = cfg.power.p_l;
    spec.base.p_c = cfg.power.p_c;
    spec.base.p_t_m = cfg.power.p_t_m;
    spec.base.xi = cfg.power.xi;
    spec.base.derive_energies();
  }
  spec.r_in = get_num(c, "csma", "r_in_bits_per_s", 1.0);

  if (c.contains("g_values")) {
    for (const auto& v : c["g_values"]) spec.g_values.push_back(v.get<double>());
  } else {
    const double g_min = get_num(c, "csma", "g_min", 0.0);
    const double g_max = get_num(c, "csma", "g_max", 20.0 / spec.base.big_t());
    const int steps = static_cast<int>(get_num(c, "csma", "g_steps", 64));
    for (int i = 0; i < steps; ++i)
      spec.g_values.push_back(g_min + (g_max - g_min) * i / std::max(1, steps - 1));
  }
  if (c.contains("n_values")) {
    for (const auto& v : c["n_values"]) spec.n_values.push_back(v.get<int>());
  } else {
    spec.n_values = {1};
  }
  return spec;
}

OptimizerSpec make_optimizer(const AppConfig& cfg) {
  OptimizerSpec spec;
  spec.d_h = cfg.r_outer;
  if (cfg.raw.contains("optimizer")) {
    const auto& o = cfg.raw["optimizer"];
    spec.z_min = static_cast<long>(get_num(o, "optimizer", "z_min", 2));
    spec.z_max = static_cast<long>(get_num(o, "optimizer", "z_max", 1000));
    spec.d_h = get_num(o, "optimizer", "d_h_m", cfg.r_outer);
    spec.e_s_h_lump = get_num(o, "optimizer", "e_s_h_lump_j", 1.5e-3);
    if (o.contains("objective")) spec.objective = o["objective"].get<std::string>();
    if (o.contains("report_z"))
      for (const auto& v : o["report_z"]) spec.report_z.push_back(v.get<long>());
    spec.cdf_samples = static_cast<int>(get_num(o, "optimizer", "cdf_samples", 0));
  }
  if (spec.report_z.empty()) spec.report_z = {10, 50, 100, 500, 1000};
  if (spec.objective != "contention" && spec.objective != "fdma")
    throw config_error("config: optimizer.objective must be contention or fdma");
  return spec;
}

FeasibilityInputs make_feasibility(const AppConfig& cfg) {
  if (!cfg.raw.contains("feasibility")) throw config_error("config: missing section feasibility");
  const auto& f = cfg.raw["feasibility"];
  FeasibilityInputs inp;
  inp.n = static_cast<int>(get_num(f, "feasibility", "n", 10, true));
  inp.r = get_num(f, "feasibility", "region_radius_m", 50.0, true);
  inp.big_r = get_num(f, "feasibility", "bs_distance_m", 250.0, true);
  inp.s_h = std::pow(10.0, get_num(f, "feasibility", "s_h_db", 20.0) / 10.0);
  inp.s_b = std::pow(10.0, get_num(f, "feasibility", "s_b_db", 20.0) / 10.0);
  inp.lambda = get_num(f, "feasibility", "lambda", 1.0);
  inp.w_m = get_num(f, "feasibility", "w_m_hz", 360e3);
  inp.w_h = get_num(f, "feasibility", "w_h_hz", 144e3);
  inp.power = cfg.power;
  inp.traffic = cfg.traffic;
  inp.traffic.d_i = get_num(f, "feasibility", "payload_bits", cfg.traffic.d_i);
  inp.env = cfg.env;
  inp.e0 = get_num(f, "feasibility", "e0_j", cfg.cluster.e0);
  inp.t_c = get_num(f, "feasibility", "t_c_s", cfg.cluster.t_c);
  if (inp.n < 1) throw config_error("config: feasibility.n must be >= 1");
  return inp;
}

sim::SimConfig make_sim_config(const AppConfig& cfg) {
  sim::SimConfig sc;
  sc.r_inner = cfg.r_inner;
  sc.r_outer = cfg.r_outer;
  sc.env = cfg.env;
  sc.power = cfg.power;
  sc.traffic = cfg.traffic;
  sc.sched = cfg.sched;
  sc.lambda = cfg.cluster.lambda;
  if (!cfg.raw.contains("sim")) throw config_error("config: missing section sim");
  const auto& s = cfg.raw["sim"];
  sc.n_devices = get_num(s, "sim", "n_devices", cfg.cluster.n_t);
  sc.t_ra = get_num(s, "sim", "t_ra_s", 1000.0);
  sc.intra_window = get_num(s, "sim", "intra_window_s", 1.4);
  sc.inter_window = get_num(s, "sim", "inter_window_s", 1.0);
  sc.n_bunches = static_cast<int>(get_num(s, "sim", "n_bunches", 7));
  sc.k_max_attempts = static_cast<int>(get_num(s, "sim", "k_max_attempts", 50));
  sc.preambles = static_cast<int>(get_num(s, "sim", "preambles", 54));
  sc.preamble_period = get_num(s, "sim", "preamble_period_s", 0.02);
  sc.preamble_time = get_num(s, "sim", "preamble_time_s", 0.001);
  sc.rar_listen = get_num(s, "sim", "rar_listen_s", 0.01);
  sc.grant_offset = get_num(s, "sim", "grant_offset_s", 0.01);
  sc.n_phases = static_cast<int>(get_num(s, "sim", "n_phases", 1));
  sc.cluster_size = get_num(s, "sim", "cluster_size", cfg.cluster.z);
  sc.e_ref = get_num(s, "sim", "e_ref_j", 0.0);
  sc.e_select = get_num(s, "sim", "e_select_j", 0.0);
  sc.e0 = get_num(s, "sim", "e0_j", cfg.cluster.e0);
  sc.seed = static_cast<std::uint64_t>(get_num(s, "sim", "seed", 1));
  sc.max_cycles = static_cast<long>(get_num(s, "sim", "max_cycles", 5'000'000));
  if (s.contains("event_log")) sc.event_log = s["event_log"].get<bool>();

  if (s.contains("variant")) {
    const std::string v = s["variant"].get<std::string>();
    if (v == "e2mac")
      sc.variant = sim::MacVariant::e2mac;
    else if (v == "e2mac-n")
      sc.variant = sim::MacVariant::e2mac_n;
    else if (v == "e2mac-r")
      sc.variant = sim::MacVariant::e2mac_r;
    else if (v == "cmac")
      sc.variant = sim::MacVariant::cmac;
    else
      throw config_error("config: sim.variant must be e2mac, e2mac-n, e2mac-r or cmac");
  }
  if (s.contains("reselect")) {
    const auto& r = s["reselect"];
    if (r.is_string()) {
      const std::string v = r.get<std::string>();
      if (v == "every-cycle" || v == "on-change")
        sc.reselect = {1, false};
      else if (v == "on-death")
        sc.reselect = {1, true};
      else
        throw config_error("config: sim.reselect must be every-cycle, on-change, on-death or a cycle count");
    } else if (r.is_number()) {
      sc.reselect = {r.get<long>(), false};
    } else {
      throw config_error("config: sim.reselect has an invalid type");
    }
  }
  return sc;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash_hex(const AppConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.raw_bytes)));
  return buf;
}

}  // namespace e2mac
