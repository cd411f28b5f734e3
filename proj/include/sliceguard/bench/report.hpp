#pragma once

#include <nlohmann/json.hpp>

#include "sliceguard/bench/probes.hpp"

namespace sliceguard::bench {

constexpr std::string_view kReportFormatVersion = "sliceguard-report/1";

struct KpiThresholds {
  double urllc_latency_ms = 1.0;
  double embb_dl_mbps = 100.0;
};

struct BenchReport {
  std::string format_version{kReportFormatVersion};
  std::string scenario;
  uint64_t seed = 0;
  nlohmann::ordered_json config;  // configuration snapshot
  std::vector<ProbeStats> stats;
  // needle -> match count, per scan scope
  std::map<std::string, size_t> scan_s6a;
  std::map<std::string, size_t> scan_tunneled;
  std::map<std::string, std::string> kpi_verdicts;
  int srt_rejected = 0;

  const ProbeStats* find_stat(const std::string& interface,
                              const std::string& metric) const;
};

// Interfaces whose latency figures the URLLC 1 ms line applies to (the
// single-site control/user plane links; Uu rides the slow emulated radio).
bool kpi_latency_interface(const std::string& interface);

std::map<std::string, std::string> kpi_check(const BenchReport& report,
                                             const KpiThresholds& thresholds);

nlohmann::ordered_json to_json(const BenchReport& report);
BenchReport report_from_json(const nlohmann::ordered_json& j);
std::string to_csv(const BenchReport& report);

void export_report(const BenchReport& report, const std::string& format,
                   const std::string& path);
BenchReport import_report(const std::string& path);

}  // namespace sliceguard::bench
