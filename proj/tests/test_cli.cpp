#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "e2mac/config.hpp"
#include "e2mac/report.hpp"
#include "e2mac/sim_engine.hpp"

using namespace e2mac;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(E2MAC_BIN) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("config parsing: defaults, units, field errors") {
  const auto cfg = parse_config(R"({
    "radio": {"n0_dbw_per_hz": -204, "gamma_db": 13},
    "power": {"p_c_w": 0.02},
    "traffic": {"t_i_s": 25200, "d_i_bits": 40000},
    "cell": {"r_inner_m": 50, "r_outer_m": 500},
    "cluster": {"n_t": 5000}
  })");
  CHECK(cfg.env.n0 == doctest::Approx(3.9810717055349565e-21).epsilon(1e-12));
  CHECK(cfg.env.gamma_gap == doctest::Approx(19.952623149688797).epsilon(1e-12));
  CHECK(cfg.traffic.r_g == doctest::Approx(1.0 / 25200.0));
  CHECK(cfg.cluster.sigma == doctest::Approx(6.4305027511876904e-3).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(parse_config(R"({"radio": {"w_m_hz": "fast"}})"),
                       "config: field radio.w_m_hz must be a number", config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"cell": {"r_inner_m": 500, "r_outer_m": 50}})"),
                       "config: cell radii must satisfy 0 <= r_inner < r_outer", config_error);
  CHECK_THROWS_AS(parse_config("{nope"), config_error);
  CHECK_THROWS_AS(parse_config(R"({"radio": {"log_base": "ternary"}})"), config_error);
}

TEST_CASE("sim section round-trips into a runnable config") {
  const auto cfg = parse_config(R"({
    "cell": {"r_inner_m": 50, "r_outer_m": 500},
    "sim": {"n_devices": 200, "t_ra_s": 100, "variant": "e2mac-r",
            "n_phases": 3, "cluster_size": 40, "reselect": "on-death",
            "e_ref_j": 1e-5, "e0_j": 0.25, "seed": 9}
  })");
  const auto sc = make_sim_config(cfg);
  CHECK(sc.variant == sim::MacVariant::e2mac_r);
  CHECK(sc.n_phases == 3);
  CHECK(sc.cluster_size == 40.0);
  CHECK(sc.reselect.on_death);
  CHECK(sc.e_ref == doctest::Approx(1e-5));
  CHECK(sc.seed == 9);
  sc.validate();

  CHECK_THROWS_AS(make_sim_config(parse_config(R"({"sim": {"variant": "aloha"}})")),
                  config_error);
  CHECK_THROWS_AS(
      make_sim_config(parse_config(R"({"sim": {"reselect": "sometimes"}})")), config_error);
}

TEST_CASE("config hash tracks the raw bytes") {
  const auto a = parse_config(R"({"cell": {"r_inner_m": 0, "r_outer_m": 100}})");
  const auto b = parse_config(R"({"cell": {"r_inner_m": 0, "r_outer_m": 100}})");
  const auto c = parse_config(R"({"cell": {"r_inner_m": 0, "r_outer_m": 101}})");
  CHECK(config_hash_hex(a) == config_hash_hex(b));
  CHECK(config_hash_hex(a) != config_hash_hex(c));
  CHECK(config_hash_hex(a).size() == 16);
}

TEST_CASE("cli: repeated invocations write byte-identical outputs") {
  const fs::path dir_a = fs::temp_directory_path() / "e2mac_cli_a";
  const fs::path dir_b = fs::temp_directory_path() / "e2mac_cli_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  const std::string cfg = std::string(CONFIG_DIR) + "/region_tradeoff.json";
  REQUIRE(run_cli("feasibility --config " + cfg + " --out-dir " + dir_a.string()) == 0);
  REQUIRE(run_cli("feasibility --config " + cfg + " --out-dir " + dir_b.string()) == 0);
  CHECK(slurp(dir_a / "feasibility.csv") == slurp(dir_b / "feasibility.csv"));
  CHECK(!slurp(dir_a / "feasibility.csv").empty());
}

TEST_CASE("cli: malformed config exits nonzero, missing out-dir is created") {
  const fs::path bad = fs::temp_directory_path() / "e2mac_bad.json";
  std::ofstream(bad) << R"({"cell": {"r_inner_m": 9000, "r_outer_m": 50}})";
  CHECK(run_cli("feasibility --config " + bad.string() + " --out-dir /tmp/e2mac_bad_out") != 0);

  const fs::path deep = fs::temp_directory_path() / "e2mac_deep" / "nested" / "dir";
  fs::remove_all(fs::temp_directory_path() / "e2mac_deep");
  const std::string cfg = std::string(CONFIG_DIR) + "/contention_sweep.json";
  REQUIRE(run_cli("analyze-csma --config " + cfg + " --out-dir " + deep.string()) == 0);
  CHECK(fs::exists(deep / "csma_sweep.csv"));
  CHECK(fs::exists(deep / "manifest.json"));
}

TEST_CASE("csma sweep spec: empty grid gives a header-only file") {
  const auto cfg = parse_config(R"({
    "csma": {"tau_p_s": 1.0, "g_values": [], "n_values": [1]}
  })");
  const auto spec = make_csma_sweep(cfg);
  CHECK(spec.g_values.empty());

  ReportWriter report(fs::temp_directory_path() / "e2mac_empty", cfg, "analyze-csma", {1});
  report.write_csma_sweep({});
  const auto text = slurp(fs::temp_directory_path() / "e2mac_empty" / "csma_sweep.csv");
  CHECK(text == "g,n,p_i,p_s,p_is,u_e_bits_per_j,u_s_bits_per_s,delay_s\n");
}

TEST_CASE("cli: optimizer table lists the requested sizes with one optimum") {
  const fs::path dir = fs::temp_directory_path() / "e2mac_cli_opt";
  fs::remove_all(dir);
  const std::string cfg = std::string(CONFIG_DIR) + "/cell_small.json";
  REQUIRE(run_cli("optimize-cluster --config " + cfg + " --out-dir " + dir.string()) == 0);
  std::ifstream in(dir / "cluster_size.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "z,lifetime_s,is_optimum");
  std::vector<long> zs;
  int optima = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string z_s, life_s, opt_s;
    std::getline(row, z_s, ',');
    std::getline(row, life_s, ',');
    std::getline(row, opt_s, ',');
    zs.push_back(std::stol(z_s));
    optima += opt_s == "1";
  }
  for (long want : {10L, 50L, 100L, 500L, 1000L})
    CHECK(std::find(zs.begin(), zs.end(), want) != zs.end());
  CHECK(optima == 1);
}

TEST_CASE("event log export is line-oriented time,device,event,energy") {
  sim::SimConfig sc;
  sc.n_devices = 60.0;
  sc.t_ra = 100.0;
  sc.traffic = {2500.0, 40000.0, 4e-4};
  sc.cluster_size = 20.0;
  sc.e0 = 0.02;
  sc.event_log = true;
  const auto out = sim::run_sim(sc);
  REQUIRE(!out.events.empty());

  const auto cfg = parse_config("{}");
  const fs::path dir = fs::temp_directory_path() / "e2mac_events";
  fs::remove_all(dir);
  ReportWriter report(dir, cfg, "simulate", {1});
  report.write_event_log(out);
  std::ifstream in(dir / "events.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "time_s,device,event,energy_j");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(lines == out.events.size());
}

TEST_CASE("manifest carries hash, seeds and file list") {
  const auto cfg = parse_config(R"({"cell": {"r_inner_m": 0, "r_outer_m": 10}})", "mem.json");
  const fs::path dir = fs::temp_directory_path() / "e2mac_manifest";
  fs::remove_all(dir);
  ReportWriter report(dir, cfg, "sweep", {4, 5});
  report.write_table("t.csv", "a,b", {"1,2"});
  report.write_manifest();
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["config_hash"] == config_hash_hex(cfg));
  CHECK(m["subcommand"] == "sweep");
  CHECK(m["seeds"].size() == 2);
  CHECK(m["files"][0] == "t.csv");
  CHECK(m["config_path"] == "mem.json");
}
