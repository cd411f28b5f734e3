#include "sliceguard/bench/scenarios.hpp"

#include "sliceguard/eps/builtin_package.hpp"

namespace sliceguard::bench {

using nlohmann::ordered_json;
using orch::NsInstance;
using orch::Orchestrator;

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "eps-plain",  "eps-wg",          "eps-wg-2x",   "nsi-embb",
      "nsi-urllc",  "nsi-both",        "multisite-plain", "multisite-wg"};
  return names;
}

namespace {

struct Recipe {
  bool multisite = false;
  bool wireguard = true;
  double multiplier = 1.0;
  std::vector<std::string> nsts;  // empty: plain NS instantiation
};

Recipe recipe_for(const std::string& name) {
  if (name == "eps-plain") return {false, false, 1.0, {}};
  if (name == "eps-wg") return {false, true, 1.0, {}};
  if (name == "eps-wg-2x") return {false, true, 2.0, {}};
  if (name == "nsi-embb") return {false, true, 1.0, {"eps-embb"}};
  if (name == "nsi-urllc") return {false, true, 1.0, {"eps-urllc"}};
  if (name == "nsi-both") return {false, true, 1.0, {"eps-embb", "eps-urllc"}};
  if (name == "multisite-plain") return {true, false, 1.0, {}};
  if (name == "multisite-wg") return {true, true, 1.0, {}};
  std::string valid;
  for (const auto& n : scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw UnknownScenario("unknown scenario '" + name + "'; valid names: " + valid);
}

void scan_needles(netem::Fabric& fabric, const std::vector<NsInstance*>& instances,
                  const std::vector<std::pair<std::string, std::string>>& needles,
                  BenchReport& report, bool multisite_tunnel) {
  for (const auto& [label, needle] : needles) {
    Bytes bytes = to_bytes(needle);
    size_t s6a = 0, tunneled = 0;
    for (NsInstance* ns : instances) {
      for (const auto& [link_name, tap] : ns->taps) {
        size_t matches = fabric.scan_tap(tap, bytes);
        if (link_name == "S6a") s6a += matches;
        if (ns->tunnel_registry.count(link_name)) tunneled += matches;
      }
    }
    if (multisite_tunnel) {
      for (netem::TapHandle tap : fabric.taps_on("intersite:vim1:vim2"))
        tunneled += fabric.scan_tap(tap, bytes);
    }
    report.scan_s6a[label] = s6a;
    report.scan_tunneled[label] = tunneled;
  }
}

}  // namespace

BenchReport run_scenario(const std::string& name, const ScenarioOverrides& ov) {
  Recipe recipe = recipe_for(name);

  ProbeDefaults d;
  if (ov.throughput_duration_s) d.throughput_duration_s = *ov.throughput_duration_s;
  if (ov.latency_count) d.latency_count = *ov.latency_count;
  if (ov.srt_attaches) d.srt_attaches = *ov.srt_attaches;

  netem::Fabric fabric(ov.seed);
  orch::EmuOptions opt;
  if (name == "multisite-wg") opt.wan_crypto_fixed = 350 * netem::kMicrosecond;
  Orchestrator orch(fabric, ov.seed, opt);
  orch.register_vim({"vim1", 56, 126.0, 915});
  netem::LinkParams intersite{180.0, 9.18, 0.0, 0.0};
  if (recipe.multisite) {
    orch.register_vim({"vim2", 9, 32.0, 150});
    fabric.configure_intersite("vim1", "vim2", intersite, true);
  }
  orch.onboard(eps::builtin_eps_package());

  std::map<std::string, std::string> placement;
  if (recipe.multisite) placement["hss"] = "vim2";

  std::vector<NsInstance*> instances;
  std::vector<std::string> labels;
  if (recipe.nsts.empty()) {
    orch::InstantiateOptions io;
    io.wireguard = recipe.wireguard;
    io.flavor_multiplier = recipe.multiplier;
    io.default_site = "vim1";
    instances.push_back(&orch.instantiate_ns("oai-eps", placement, io));
    labels.push_back("");
  } else {
    for (const auto& nst : recipe.nsts) {
      orch::InstantiateOptions io;
      io.flavor_multiplier = recipe.multiplier;
      io.default_site = "vim1";
      orch::NsiInstance& nsi = orch.instantiate_nsi(nst, placement, io);
      instances.push_back(nsi.ns);
      labels.push_back(recipe.nsts.size() > 1 ? nst + ":" : "");
    }
  }

  BenchReport report;
  report.scenario = name;
  report.seed = ov.seed;

  const std::vector<std::string> battery = {"S1-C", "S1-U", "S6a"};

  // control-plane probes first; the attach traffic is what the taps must see
  for (size_t i = 0; i < instances.size(); ++i) {
    ProbeRunner runner(orch, *instances[i]);
    int rejected = 0;
    ProbeStats srt = runner.srt(d.srt_attaches, &rejected);
    srt.interface = labels[i] + srt.interface;
    report.stats.push_back(srt);
    report.srt_rejected += rejected;

    ProbeStats uu_lat = runner.ue_latency(std::min(d.latency_count, 200),
                                          d.latency_payload);
    uu_lat.interface = labels[i] + uu_lat.interface;
    report.stats.push_back(uu_lat);

    ProbeStats uu_thr =
        runner.ue_throughput(d.throughput_duration_s, d.throughput_payload,
                             d.throughput_window);
    uu_thr.interface = labels[i] + uu_thr.interface;
    report.stats.push_back(uu_thr);

    for (const auto& link : battery) {
      ProbeStats lat = runner.latency(link, d.latency_count,
                                      d.latency_interval_ms, d.latency_payload);
      lat.interface = labels[i] + lat.interface;
      report.stats.push_back(lat);
    }
  }

  // throughput streams saturate links; pause taps so capture stays bounded
  for (NsInstance* ns : instances) {
    for (const auto& [link_name, tap] : ns->taps) fabric.pause_tap(tap);
  }
  {
    std::vector<std::unique_ptr<ProbeRunner>> runners;
    for (NsInstance* ns : instances)
      runners.push_back(std::make_unique<ProbeRunner>(orch, *ns));
    for (const auto& link : battery) {
      // streams of every instance share the virtual window
      std::vector<std::shared_ptr<ProbeRunner::Stream>> streams;
      for (auto& runner : runners)
        streams.push_back(runner->begin_throughput(link, d.throughput_duration_s,
                                                   d.throughput_payload,
                                                   d.throughput_window));
      fabric.run_until_idle();
      for (size_t i = 0; i < runners.size(); ++i) {
        ProbeStats thr = runners[i]->finish_throughput(streams[i]);
        thr.interface = labels[i] + thr.interface;
        report.stats.push_back(thr);
      }
    }
  }
  for (NsInstance* ns : instances) {
    for (const auto& [link_name, tap] : ns->taps) fabric.resume_tap(tap);
  }

  const auto& sub = orch.options().subscribers.front();
  std::vector<std::pair<std::string, std::string>> needles = {
      {"imsi", sub.imsi},
      {"realm", sub.realm},
      {"hostname", "hss." + sub.realm},
  };
  scan_needles(fabric, instances, needles, report,
               recipe.multisite && recipe.wireguard);

  report.kpi_verdicts = kpi_check(report, KpiThresholds{});

  ordered_json config;
  config["wireguard"] = recipe.wireguard;
  config["flavor_multiplier"] = recipe.multiplier;
  config["multisite"] = recipe.multisite;
  ordered_json pl = ordered_json::object();
  for (NsInstance* ns : instances) {
    for (const auto& [unit, site] : ns->placement) pl[ns->id + "." + unit] = site;
  }
  config["placement"] = pl;
  if (recipe.multisite) {
    config["intersite"] = {{"capacity_mbps", intersite.capacity_mbps},
                           {"delay_ms", intersite.delay_ms},
                           {"site_tunnel", true}};
  }
  config["probes"] = {{"latency_count", d.latency_count},
                      {"latency_payload", d.latency_payload},
                      {"throughput_duration_s", d.throughput_duration_s},
                      {"throughput_payload", d.throughput_payload},
                      {"throughput_window", d.throughput_window},
                      {"srt_attaches", d.srt_attaches}};
  config["rates"] = {{"per_vcpu_rate_mbps", opt.per_vcpu_rate_mbps},
                     {"crypto_rate_per_vcpu_mbps", opt.crypto_rate_per_vcpu_mbps},
                     {"wan_crypto_fixed_us",
                      double(opt.wan_crypto_fixed) / double(netem::kMicrosecond)},
                     {"hss_service_ms",
                      double(opt.nf.hss_service) / double(netem::kMillisecond)}};
  report.config = config;

  for (NsInstance* ns : instances) orch.terminate(*ns);
  return report;
}

}  // namespace sliceguard::bench
