#include "e2mac/report.hpp"

#include <array>
#include <fstream>
#include <iomanip>

namespace e2mac {

namespace fs = std::filesystem;

std::string tool_version() { return "0.1.0"; }

ReportWriter::ReportWriter(fs::path out_dir, const AppConfig& cfg, std::string subcommand,
                           std::vector<std::uint64_t> seeds)
    : out_dir_(std::move(out_dir)),
      cfg_(cfg),
      subcommand_(std::move(subcommand)),
      seeds_(std::move(seeds)) {
  fs::create_directories(out_dir_);
}

namespace {

std::ofstream open_csv(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);  // binary keeps line endings stable
  if (!os) throw std::runtime_error("report: cannot write " + p.string());
  os << std::setprecision(17);
  return os;
}

}  // namespace

void ReportWriter::write_lifetime_cdf(const sim::SimOutcome& outcome) {
  auto os = open_csv(out_dir_ / "lifetime_cdf.csv");
  os << "time_s,fraction_dead\n";
  for (const auto& [t, f] : sim::lifetime_cdf(outcome)) os << t << ',' << f << '\n';
  files_.push_back("lifetime_cdf.csv");
}

void ReportWriter::write_delay_cdf(const sim::SimOutcome& outcome) {
  auto os = open_csv(out_dir_ / "delay_cdf.csv");
  os << "delay_s,fraction\n";
  for (const auto& [d, f] : sim::delay_cdf(outcome)) os << d << ',' << f << '\n';
  files_.push_back("delay_cdf.csv");
}

void ReportWriter::write_event_log(const sim::SimOutcome& outcome) {
  static const char* kind_names[] = {"window", "tx_start", "tx_end", "deliver", "collide",
                                     "busy",   "defer",    "drop",   "die"};
  auto os = open_csv(out_dir_ / "events.csv");
  os << "time_s,device,event,energy_j\n";
  for (const auto& ev : outcome.events)
    os << ev.time << ',' << ev.device << ',' << kind_names[static_cast<int>(ev.kind)] << ','
       << ev.energy << '\n';
  files_.push_back("events.csv");
}

void ReportWriter::write_summary(const std::vector<sim::VariantSummary>& rows) {
  auto os = open_csv(out_dir_ / "summary.csv");
  os << "variant,seed,fed_s,last_death_s,delay_p50_s,delay_max_s\n";
  for (const auto& r : rows)
    os << r.variant << ',' << r.seed << ',' << r.fed_s << ',' << r.last_death_s << ','
       << r.delay_p50_s << ',' << r.delay_max_s << '\n';
  files_.push_back("summary.csv");
}

void ReportWriter::write_csma_sweep(const std::vector<std::array<double, 8>>& rows) {
  auto os = open_csv(out_dir_ / "csma_sweep.csv");
  os << "g,n,p_i,p_s,p_is,u_e_bits_per_j,u_s_bits_per_s,delay_s\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  files_.push_back("csma_sweep.csv");
}

void ReportWriter::write_table(const std::string& name, const std::string& header,
                               const std::vector<std::string>& rows) {
  auto os = open_csv(out_dir_ / name);
  os << header << '\n';
  for (const auto& r : rows) os << r << '\n';
  files_.push_back(name);
}

void ReportWriter::write_manifest() {
  nlohmann::json m;
  m["config_path"] = cfg_.path;
  m["config_hash"] = config_hash_hex(cfg_);
  m["subcommand"] = subcommand_;
  m["seeds"] = seeds_;
  m["out_dir"] = out_dir_.string();
  m["tool_version"] = tool_version();
  m["files"] = files_;
  std::ofstream os(out_dir_ / "manifest.json", std::ios::binary);
  if (!os) throw std::runtime_error("report: cannot write manifest.json");
  os << m.dump(2) << '\n';
}

}  // namespace e2mac
