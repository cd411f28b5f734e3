#include "sliceguard/bench/report.hpp"

#include <fstream>
#include <sstream>

namespace sliceguard::bench {

using nlohmann::ordered_json;

const ProbeStats* BenchReport::find_stat(const std::string& interface,
                                         const std::string& metric) const {
  for (const auto& s : stats) {
    if (s.interface == interface && s.metric == metric) return &s;
  }
  return nullptr;
}

namespace {
// nsi-both labels stats "<slice>:<interface>"
std::string base_interface(const std::string& interface) {
  size_t colon = interface.find(':');
  return colon == std::string::npos ? interface : interface.substr(colon + 1);
}
}  // namespace

bool kpi_latency_interface(const std::string& interface) {
  std::string base = base_interface(interface);
  return base == "S1-C" || base == "S1-U" || base == "S6a" || base == "S11" ||
         base == "Sx";
}

std::map<std::string, std::string> kpi_check(const BenchReport& report,
                                             const KpiThresholds& thresholds) {
  std::map<std::string, std::string> verdicts;

  bool any_latency = false;
  bool latency_ok = true;
  for (const auto& s : report.stats) {
    if (s.metric != "latency" || !kpi_latency_interface(s.interface)) continue;
    any_latency = true;
    latency_ok &= s.mean < thresholds.urllc_latency_ms;
  }
  verdicts["urllc_latency_1ms"] =
      any_latency ? (latency_ok ? "pass" : "fail") : "not-evaluated";

  bool any_s1u = false;
  bool s1u_ok = true;
  for (const auto& s : report.stats) {
    if (s.metric != "throughput" || base_interface(s.interface) != "S1-U") continue;
    any_s1u = true;
    s1u_ok &= s.mean >= thresholds.embb_dl_mbps;
  }
  verdicts["embb_s1u_100mbps"] =
      any_s1u ? (s1u_ok ? "pass" : "fail") : "not-evaluated";
  return verdicts;
}

namespace {
ordered_json stats_json(const ProbeStats& s) {
  ordered_json j;
  j["interface"] = s.interface;
  j["metric"] = s.metric;
  j["count"] = s.count;
  j["min"] = s.min;
  j["mean"] = s.mean;
  j["max"] = s.max;
  j["mdev"] = s.mdev;
  j["unit"] = s.unit;
  return j;
}

ProbeStats stats_from_json(const ordered_json& j) {
  ProbeStats s;
  s.interface = j.at("interface").get<std::string>();
  s.metric = j.at("metric").get<std::string>();
  s.count = j.at("count").get<int>();
  s.min = j.at("min").get<double>();
  s.mean = j.at("mean").get<double>();
  s.max = j.at("max").get<double>();
  s.mdev = j.at("mdev").get<double>();
  s.unit = j.at("unit").get<std::string>();
  return s;
}

ordered_json scan_json(const std::map<std::string, size_t>& scan) {
  ordered_json j = ordered_json::object();
  for (const auto& [needle, count] : scan) j[needle] = count;
  return j;
}
}  // namespace

ordered_json to_json(const BenchReport& report) {
  ordered_json j;
  j["format_version"] = report.format_version;
  j["scenario"] = report.scenario;
  j["seed"] = report.seed;
  j["config"] = report.config;
  ordered_json stats = ordered_json::array();
  for (const auto& s : report.stats) stats.push_back(stats_json(s));
  j["stats"] = stats;
  ordered_json isolation;
  isolation["s6a"] = scan_json(report.scan_s6a);
  isolation["tunneled"] = scan_json(report.scan_tunneled);
  j["isolation"] = isolation;
  ordered_json verdicts = ordered_json::object();
  for (const auto& [k, v] : report.kpi_verdicts) verdicts[k] = v;
  j["kpi_verdicts"] = verdicts;
  j["srt_rejected"] = report.srt_rejected;
  return j;
}

BenchReport report_from_json(const ordered_json& j) {
  BenchReport r;
  r.format_version = j.at("format_version").get<std::string>();
  if (r.format_version != kReportFormatVersion)
    throw std::runtime_error("unsupported report format " + r.format_version);
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  r.config = j.at("config");
  for (const auto& s : j.at("stats")) r.stats.push_back(stats_from_json(s));
  for (auto it : j.at("isolation").at("s6a").items())
    r.scan_s6a[it.key()] = it.value().get<size_t>();
  for (auto it : j.at("isolation").at("tunneled").items())
    r.scan_tunneled[it.key()] = it.value().get<size_t>();
  for (auto it : j.at("kpi_verdicts").items())
    r.kpi_verdicts[it.key()] = it.value().get<std::string>();
  r.srt_rejected = j.at("srt_rejected").get<int>();
  return r;
}

std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "interface,metric,count,min,mean,max,mdev,unit\n";
  char line[256];
  for (const auto& s : report.stats) {
    snprintf(line, sizeof(line), "%s,%s,%d,%.6f,%.6f,%.6f,%.6f,%s\n",
             s.interface.c_str(), s.metric.c_str(), s.count, s.min, s.mean,
             s.max, s.mdev, s.unit.c_str());
    out << line;
  }
  return out.str();
}

void export_report(const BenchReport& report, const std::string& format,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (format == "json") {
    out << to_json(report).dump(2) << "\n";
  } else if (format == "csv") {
    out << to_csv(report);
  } else {
    throw std::invalid_argument("unknown export format '" + format + "'");
  }
  if (!out.good()) throw std::runtime_error("write failed for " + path);
}

BenchReport import_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  ordered_json j = ordered_json::parse(in);
  return report_from_json(j);
}

}  // namespace sliceguard::bench
