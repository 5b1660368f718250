#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "e2mac/config.hpp"
#include "e2mac/sim_engine.hpp"

namespace e2mac {

// Output-directory writer with the fixed CSV schemas. Every emit() call also
// records the file for the manifest.
class ReportWriter {
 public:
  ReportWriter(std::filesystem::path out_dir, const AppConfig& cfg, std::string subcommand,
               std::vector<std::uint64_t> seeds);

  void write_lifetime_cdf(const sim::SimOutcome& outcome);
  void write_delay_cdf(const sim::SimOutcome& outcome);
  void write_event_log(const sim::SimOutcome& outcome);
  void write_summary(const std::vector<sim::VariantSummary>& rows);
  void write_csma_sweep(const std::vector<std::array<double, 8>>& rows);
  void write_table(const std::string& name, const std::string& header,
                   const std::vector<std::string>& rows);
  void write_manifest();

  const std::filesystem::path& dir() const { return out_dir_; }

 private:
  std::filesystem::path out_dir_;
  const AppConfig& cfg_;
  std::string subcommand_;
  std::vector<std::uint64_t> seeds_;
  std::vector<std::string> files_;
};

std::string tool_version();

}  // namespace e2mac
