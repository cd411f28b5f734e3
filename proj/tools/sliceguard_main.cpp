// sliceguard: network-slicing testbed driver.
//
// State model: mutating verbs (onboard, instantiate, action) append to a
// journal under the state directory; every invocation replays the journal
// against a fresh deterministic emulation, so inspection verbs (ns show,
// relation show, tap scan) always see the world those commands built.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sliceguard/bench/scenarios.hpp"
#include "sliceguard/desc/descriptors.hpp"
#include "sliceguard/eps/builtin_package.hpp"
#include "sliceguard/orch/orchestrator.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sliceguard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct World {
  fs::path state_dir;
  uint64_t seed = 1;
  std::unique_ptr<netem::Fabric> fabric;
  std::unique_ptr<orch::Orchestrator> orch;

  explicit World(fs::path dir) : state_dir(std::move(dir)) {
    fs::path seed_file = state_dir / "world.json";
    if (fs::exists(seed_file)) {
      std::ifstream in(seed_file);
      ordered_json j = ordered_json::parse(in);
      seed = j.at("seed").get<uint64_t>();
    }
    fabric = std::make_unique<netem::Fabric>(seed);
    orch = std::make_unique<orch::Orchestrator>(*fabric, seed);
    orch->register_vim({"vim1", 56, 126.0, 915});
    orch->register_vim({"vim2", 9, 32.0, 150});
    fabric->configure_intersite("vim1", "vim2", {180.0, 9.18, 0.0, 0.0}, true);
  }

  void persist_seed() {
    fs::create_directories(state_dir);
    std::ofstream out(state_dir / "world.json");
    ordered_json j;
    j["seed"] = seed;
    out << j.dump(2) << "\n";
  }

  void load_catalog() {
    fs::path catalog = state_dir / "catalog";
    if (!fs::is_directory(catalog)) return;
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(catalog))
      if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) orch->onboard(desc::load_package_dir(dir));
  }

  void apply(const ordered_json& op) {
    std::string kind = op.at("op").get<std::string>();
    if (kind == "instantiate_ns" || kind == "instantiate_nsi") {
      orch::InstantiateOptions io;
      io.wireguard = op.at("wireguard").get<bool>();
      io.flavor_multiplier = op.at("multiplier").get<double>();
      io.default_site = "vim1";
      std::map<std::string, std::string> placement;
      for (auto it : op.at("placement").items())
        placement[it.key()] = it.value().get<std::string>();
      if (kind == "instantiate_ns") {
        orch->instantiate_ns(op.at("id").get<std::string>(), placement, io);
      } else {
        orch->instantiate_nsi(op.at("id").get<std::string>(), placement, io);
      }
    } else if (kind == "action") {
      orch::NsInstance* ns = orch->find_ns(op.at("ns").get<std::string>());
      if (!ns) throw orch::UnknownEntity("journal references unknown ns");
      std::map<std::string, std::string> params;
      for (auto it : op.at("params").items())
        params[it.key()] = it.value().get<std::string>();
      orch->run_action(*ns, op.at("unit").get<std::string>(),
                       op.at("action").get<std::string>(), params);
    } else {
      throw std::runtime_error("unknown journal op '" + kind + "'");
    }
  }

  void replay() {
    load_catalog();
    fs::path journal = state_dir / "journal.jsonl";
    if (!fs::exists(journal)) return;
    std::ifstream in(journal);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      apply(ordered_json::parse(line));
    }
  }

  void append(const ordered_json& op) {
    persist_seed();
    std::ofstream out(state_dir / "journal.jsonl", std::ios::app);
    out << op.dump() << "\n";
  }
};

int cmd_validate(const std::string& dir) {
  desc::DescriptorPackage pkg = desc::load_package_dir(dir);
  auto findings = desc::validate_package(pkg);
  if (findings.empty()) {
    std::cout << "package valid: " << pkg.vnfds.size() << " vnfd(s), "
              << (pkg.nsd ? 1 : 0) << " nsd, " << pkg.nsts.size() << " nst(s)\n";
    return kExitOk;
  }
  for (const auto& f : findings)
    std::cout << "finding: " << f.path << ": " << f.message << "\n";
  return kExitValidation;
}

int cmd_onboard(World& world, const std::string& dir) {
  desc::DescriptorPackage pkg = desc::load_package_dir(dir);
  auto findings = desc::validate_package(pkg);
  if (!findings.empty()) {
    for (const auto& f : findings)
      std::cout << "finding: " << f.path << ": " << f.message << "\n";
    return kExitValidation;
  }
  if (!pkg.nsd) {
    std::cout << "finding: nsd: package carries no nsd\n";
    return kExitValidation;
  }
  world.persist_seed();
  desc::write_package_dir(pkg, world.state_dir / "catalog" / pkg.nsd->id);
  std::cout << "onboarded " << pkg.nsd->id << "\n";
  return kExitOk;
}

std::map<std::string, std::string> parse_placement(
    const std::vector<std::string>& site_args) {
  std::map<std::string, std::string> placement;
  for (const auto& arg : site_args) {
    size_t eq = arg.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--site expects unit=site, got '" + arg + "'");
    placement[arg.substr(0, eq)] = arg.substr(eq + 1);
  }
  return placement;
}

int cmd_instantiate(World& world, const std::string& kind, const std::string& id,
                    const std::vector<std::string>& site_args, bool no_wireguard,
                    double multiplier) {
  world.replay();
  ordered_json op;
  op["op"] = kind == "ns" ? "instantiate_ns" : "instantiate_nsi";
  op["id"] = id;
  op["wireguard"] = !no_wireguard;
  op["multiplier"] = multiplier;
  ordered_json placement = ordered_json::object();
  for (const auto& [unit, site] : parse_placement(site_args)) placement[unit] = site;
  op["placement"] = placement;
  world.apply(op);
  world.append(op);

  const std::string& ns_id = world.orch->ns_ids().back();
  orch::NsInstance* ns = world.orch->find_ns(ns_id);
  std::cout << (kind == "ns" ? "ns " : "nsi over ns ") << ns_id << " "
            << orch::to_string(ns->phase) << "; tunnels: "
            << ns->tunnel_registry.size() << "\n";
  return kExitOk;
}

int cmd_action(World& world, const std::string& ns_id, const std::string& unit,
               const std::string& action, const std::vector<std::string>& kv) {
  world.replay();
  orch::NsInstance* ns = world.orch->find_ns(ns_id);
  if (!ns) throw orch::UnknownEntity("no ns '" + ns_id + "'");
  std::map<std::string, std::string> params;
  for (const auto& arg : kv) {
    size_t eq = arg.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("action params expect k=v, got '" + arg + "'");
    params[arg.substr(0, eq)] = arg.substr(eq + 1);
  }
  auto result = world.orch->run_action(*ns, unit, action, params);
  ordered_json op;
  op["op"] = "action";
  op["ns"] = ns_id;
  op["unit"] = unit;
  op["action"] = action;
  ordered_json pj = ordered_json::object();
  for (const auto& [k, v] : params) pj[k] = v;
  op["params"] = pj;
  world.append(op);
  for (const auto& [k, v] : result) std::cout << k << ": " << v << "\n";
  return kExitOk;
}

int cmd_ns_show(World& world, bool as_json) {
  world.replay();
  if (as_json) {
    ordered_json all = ordered_json::array();
    for (const auto& id : world.orch->ns_ids())
      all.push_back(world.orch->ns_show(*world.orch->find_ns(id)));
    std::cout << all.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& id : world.orch->ns_ids()) {
    orch::NsInstance* ns = world.orch->find_ns(id);
    std::cout << id << "  phase=" << orch::to_string(ns->phase)
              << " wireguard=" << (ns->options.wireguard ? "on" : "off")
              << " tunnels=" << ns->tunnel_registry.size() << "\n";
    for (const auto& [unit, site] : ns->placement)
      std::cout << "  " << unit << " @ " << site << "\n";
  }
  return kExitOk;
}

int cmd_relation_show(World& world, const std::string& ns_id) {
  world.replay();
  orch::NsInstance* ns = world.orch->find_ns(ns_id);
  if (!ns) throw orch::UnknownEntity("no ns '" + ns_id + "'");
  for (const auto& [link_name, entry] : ns->tunnel_registry) {
    const rel::RelationInstance& rel = world.orch->bus().relation(entry.relation);
    std::cout << rel.name << " (" << link_name << ") "
              << entry.unit_a << " <-> " << entry.unit_b
              << (entry.established ? " [established]" : " [pending]") << "\n";
    auto print_bag = [&](const std::string& side, const rel::RelationDataBag& bag) {
      std::cout << "  " << side << " bag v" << bag.version << "\n";
      for (const auto& [k, v] : bag.entries)
        std::cout << "    " << k << ": " << v << "\n";
    };
    print_bag(rel.side_a, rel.bag_a);
    print_bag(rel.side_b, rel.bag_b);
  }
  return kExitOk;
}

int cmd_tap_scan(World& world, const std::string& ns_id, const std::string& needle) {
  world.replay();
  orch::NsInstance* ns = world.orch->find_ns(ns_id);
  if (!ns) throw orch::UnknownEntity("no ns '" + ns_id + "'");
  Bytes bytes = to_bytes(needle);
  size_t total = 0;
  for (const auto& [link_name, tap] : ns->taps) {
    size_t n = world.fabric->scan_tap(tap, bytes);
    std::cout << link_name << ": " << n << "\n";
    total += n;
  }
  std::cout << "total: " << total << "\n";
  return kExitOk;
}

int cmd_bench_run(const std::string& scenario, uint64_t seed,
                  const std::string& out_path) {
  bench::ScenarioOverrides ov;
  ov.seed = seed;
  bench::BenchReport report = bench::run_scenario(scenario, ov);
  if (!out_path.empty()) {
    bench::export_report(report, "json", out_path);
    std::cout << "report written to " << out_path << "\n";
  } else {
    std::cout << bench::to_json(report).dump(2) << "\n";
  }
  for (const auto& [k, v] : report.kpi_verdicts)
    std::cout << "kpi " << k << ": " << v << "\n";
  return kExitOk;
}

int cmd_bench_kpi(const std::string& path) {
  bench::BenchReport report = bench::import_report(path);
  auto verdicts = bench::kpi_check(report, bench::KpiThresholds{});
  for (const auto& [k, v] : verdicts) std::cout << k << ": " << v << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sliceguard: emulated NFV slicing testbed with encrypted tunnels"};
  app.require_subcommand(1);
  std::string state_dir = ".sliceguard";
  app.add_option("--state", state_dir, "state directory")->capture_default_str();

  std::string dir, id, ns_id, unit, action, needle, report_path, out_path;
  std::vector<std::string> site_args, kv_args;
  bool no_wireguard = false, as_json = false;
  double multiplier = 1.0;
  uint64_t seed = 1;
  std::string kind, scenario;

  CLI::App* onboard = app.add_subcommand("onboard", "validate and store a package");
  onboard->add_option("dir", dir)->required();

  CLI::App* validate = app.add_subcommand("validate", "validate a package directory");
  validate->add_option("dir", dir)->required();

  CLI::App* inst = app.add_subcommand("instantiate", "instantiate ns|nsi <id>");
  inst->add_option("kind", kind)->required()->check(CLI::IsMember({"ns", "nsi"}));
  inst->add_option("id", id)->required();
  inst->add_option("--site", site_args, "unit=site placement");
  inst->add_flag("--no-wireguard", no_wireguard);
  inst->add_option("--multiplier", multiplier);

  CLI::App* act = app.add_subcommand("action", "run a day-2 action");
  act->add_option("ns", ns_id)->required();
  act->add_option("unit", unit)->required();
  act->add_option("name", action)->required();
  act->add_option("params", kv_args, "k=v ...");

  CLI::App* rel_cmd = app.add_subcommand("relation", "relation show <ns>");
  CLI::App* rel_show = rel_cmd->add_subcommand("show");
  rel_show->add_option("ns", ns_id)->required();

  CLI::App* ns_cmd = app.add_subcommand("ns", "ns show [--json]");
  CLI::App* ns_show = ns_cmd->add_subcommand("show");
  ns_show->add_flag("--json", as_json);

  CLI::App* tap = app.add_subcommand("tap", "tap scan <ns> <needle>");
  CLI::App* tap_scan = tap->add_subcommand("scan");
  tap_scan->add_option("ns", ns_id)->required();
  tap_scan->add_option("needle", needle)->required();

  CLI::App* bench_cmd = app.add_subcommand("bench", "bench run|kpi");
  CLI::App* bench_run = bench_cmd->add_subcommand("run");
  bench_run->add_option("scenario", scenario)->required();
  bench_run->add_option("--seed", seed);
  bench_run->add_option("--out", out_path);
  CLI::App* bench_kpi = bench_cmd->add_subcommand("kpi");
  bench_kpi->add_option("report", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(dir);
    if (*onboard) {
      World world((fs::path(state_dir)));
      return cmd_onboard(world, dir);
    }
    if (*inst) {
      World world((fs::path(state_dir)));
      return cmd_instantiate(world, kind, id, site_args, no_wireguard, multiplier);
    }
    if (*act) {
      World world((fs::path(state_dir)));
      return cmd_action(world, ns_id, unit, action, kv_args);
    }
    if (*rel_cmd && *rel_show) {
      World world((fs::path(state_dir)));
      return cmd_relation_show(world, ns_id);
    }
    if (*ns_cmd && *ns_show) {
      World world((fs::path(state_dir)));
      return cmd_ns_show(world, as_json);
    }
    if (*tap && *tap_scan) {
      World world((fs::path(state_dir)));
      return cmd_tap_scan(world, ns_id, needle);
    }
    if (*bench_cmd && *bench_run) return cmd_bench_run(scenario, seed, out_path);
    if (*bench_cmd && *bench_kpi) return cmd_bench_kpi(report_path);
    std::cerr << "missing subcommand\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bench::UnknownScenario& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const orch::ValidationFailed& e) {
    std::cerr << "validation failed:\n";
    for (const auto& f : e.findings)
      std::cerr << "  " << f.path << ": " << f.message << "\n";
    return kExitValidation;
  } catch (const desc::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const desc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
