#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sliceguard/bench/scenarios.hpp"

using namespace sliceguard;
using namespace sliceguard::bench;

namespace {
ScenarioOverrides quick(uint64_t seed = 1) {
  ScenarioOverrides ov;
  ov.seed = seed;
  ov.throughput_duration_s = 0.25;
  ov.latency_count = 40;
  ov.srt_attaches = 3;
  return ov;
}
}  // namespace

TEST_CASE("stats math") {
  ProbeStats s = stats_from("S6a", "latency", "ms", {1.0, 2.0, 3.0});
  CHECK(s.count == 3);
  CHECK(s.min == 1.0);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.max == 3.0);
  CHECK(s.mdev == doctest::Approx(0.8164965809));
  CHECK(s.min <= s.mean);
  CHECK(s.mean <= s.max);

  ProbeStats one = stats_from("S6a", "latency", "ms", {5.5});
  CHECK(one.min == one.mean);
  CHECK(one.mean == one.max);
  CHECK(one.mdev == 0.0);

  CHECK_THROWS_AS(stats_from("S6a", "latency", "ms", {}), EmptyProbe);
}

TEST_CASE("kpi verdicts follow the thresholds") {
  BenchReport report;
  report.stats.push_back({"S1-C", "latency", 10, 0.8, 0.9, 1.1, 0.05, "ms"});
  report.stats.push_back({"S1-U", "throughput", 1, 101, 101, 101, 0, "Mbps"});
  auto verdicts = kpi_check(report, KpiThresholds{});
  CHECK(verdicts.at("urllc_latency_1ms") == "pass");
  CHECK(verdicts.at("embb_s1u_100mbps") == "pass");

  report.stats[0].mean = 1.2;
  CHECK(kpi_check(report, KpiThresholds{}).at("urllc_latency_1ms") == "fail");
  report.stats[1].mean = 99.0;
  CHECK(kpi_check(report, KpiThresholds{}).at("embb_s1u_100mbps") == "fail");

  BenchReport empty;
  auto missing = kpi_check(empty, KpiThresholds{});
  CHECK(missing.at("urllc_latency_1ms") == "not-evaluated");
  CHECK(missing.at("embb_s1u_100mbps") == "not-evaluated");

  // Uu latency never counts toward the 1 ms line
  BenchReport uu;
  uu.stats.push_back({"Uu", "latency", 10, 5, 5, 5, 0, "ms"});
  CHECK(kpi_check(uu, KpiThresholds{}).at("urllc_latency_1ms") == "not-evaluated");
}

TEST_CASE("unknown scenario names list the valid ones") {
  try {
    run_scenario("eps-bogus", {});
    FAIL("expected UnknownScenario");
  } catch (const UnknownScenario& e) {
    std::string what = e.what();
    CHECK(what.find("eps-bogus") != std::string::npos);
    for (const auto& name : scenario_names())
      CHECK(what.find(name) != std::string::npos);
  }
}

TEST_CASE("report json round trip and kpi coherence") {
  BenchReport report = run_scenario("eps-wg", quick());
  nlohmann::ordered_json j = to_json(report);
  BenchReport back = report_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(to_json(back).dump(2) == j.dump(2));

  // verdicts recomputed from the parsed report match the stored ones
  auto recomputed = kpi_check(back, KpiThresholds{});
  CHECK(recomputed == report.kpi_verdicts);
  CHECK(back.format_version == "sliceguard-report/1");
}

TEST_CASE("csv flattening has one row per probe plus a header") {
  BenchReport report = run_scenario("eps-plain", quick());
  std::string csv = to_csv(report);
  size_t lines = size_t(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == report.stats.size() + 1);
  CHECK(csv.rfind("interface,metric,count,min,mean,max,mdev,unit\n", 0) == 0);
}

TEST_CASE("export and import are stable; bad paths surface the path") {
  namespace fs = std::filesystem;
  BenchReport report = run_scenario("eps-plain", quick());
  fs::path dir = fs::temp_directory_path() / "sliceguard-bench-test";
  fs::create_directories(dir);
  std::string path = (dir / "report.json").string();
  export_report(report, "json", path);
  BenchReport back = import_report(path);
  CHECK(to_json(back) == to_json(report));

  // re-export is byte stable
  std::string path2 = (dir / "report2.json").string();
  export_report(back, "json", path2);
  std::ifstream f1(path), f2(path2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);

  export_report(report, "csv", (dir / "report.csv").string());
  try {
    export_report(report, "json", (dir / "missing" / "x.json").string());
    FAIL("expected an io error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("same seed reproduces a byte-identical report") {
  BenchReport a = run_scenario("eps-wg", quick(7));
  BenchReport b = run_scenario("eps-wg", quick(7));
  CHECK(to_json(a).dump(2) == to_json(b).dump(2));
  BenchReport c = run_scenario("eps-wg", quick(8));
  CHECK(to_json(a).dump(2) != to_json(c).dump(2));
}

TEST_CASE("monotone overhead: tunnels never speed things up") {
  BenchReport plain = run_scenario("eps-plain", quick());
  BenchReport wg = run_scenario("eps-wg", quick());
  for (const char* iface : {"S1-C", "S1-U", "S6a"}) {
    const ProbeStats* lat_p = plain.find_stat(iface, "latency");
    const ProbeStats* lat_w = wg.find_stat(iface, "latency");
    REQUIRE(lat_p != nullptr);
    REQUIRE(lat_w != nullptr);
    CHECK(lat_w->mean >= lat_p->mean);
    const ProbeStats* thr_p = plain.find_stat(iface, "throughput");
    const ProbeStats* thr_w = wg.find_stat(iface, "throughput");
    CHECK(thr_w->mean <= thr_p->mean);
  }
}

TEST_CASE("isolation needles show up plain and vanish under tunnels") {
  BenchReport plain = run_scenario("eps-plain", quick());
  for (const char* needle : {"imsi", "realm", "hostname"}) {
    CHECK(plain.scan_s6a.at(needle) >= 1);
  }
  BenchReport wg = run_scenario("eps-wg", quick());
  for (const char* needle : {"imsi", "realm", "hostname"}) {
    CHECK(wg.scan_tunneled.at(needle) == 0);
  }
  CHECK(wg.kpi_verdicts.at("urllc_latency_1ms") == "pass");
}
