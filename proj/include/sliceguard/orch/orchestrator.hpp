#pragma once

#include <nlohmann/json.hpp>

#include "sliceguard/desc/descriptors.hpp"
#include "sliceguard/orch/unit.hpp"

namespace sliceguard::orch {

struct DuplicateSite : std::runtime_error {
  explicit DuplicateSite(const std::string& what) : std::runtime_error(what) {}
};
struct ValidationFailed : std::runtime_error {
  explicit ValidationFailed(std::vector<desc::ValidationFinding> f)
      : std::runtime_error("package validation failed with " +
                           std::to_string(f.size()) + " finding(s)"),
        findings(std::move(f)) {}
  std::vector<desc::ValidationFinding> findings;
};
struct InsufficientResources : std::runtime_error {
  explicit InsufficientResources(const std::string& what)
      : std::runtime_error(what) {}
};
struct Day1Failure : std::runtime_error {
  Day1Failure(const std::string& unit, const std::string& action,
              const std::string& why)
      : std::runtime_error("day-1 action '" + action + "' failed on " + unit +
                           ": " + why),
        unit(unit),
        action(action) {}
  std::string unit;
  std::string action;
};
struct PeeringTimeout : std::runtime_error {
  explicit PeeringTimeout(const std::string& relation)
      : std::runtime_error("peering timed out on relation " + relation),
        relation(relation) {}
  std::string relation;
};
struct UnknownAction : std::runtime_error {
  explicit UnknownAction(const std::string& what) : std::runtime_error(what) {}
};
struct ActionFailed : std::runtime_error {
  explicit ActionFailed(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownEntity : std::runtime_error {
  explicit UnknownEntity(const std::string& what) : std::runtime_error(what) {}
};

struct VimConfig {
  std::string id;
  int vcpus = 0;
  double ram_gb = 0;
  int storage_gb = 0;
};

struct VimUsage {
  int vcpus = 0;
  double ram_gb = 0;
  int storage_gb = 0;
};

struct VimHandle {
  VimConfig config;
  VimUsage used;
  std::string internal_prefix;  // "10.0.<n>."
  std::string floating_prefix;  // "172.16.<n>."
  int next_host = 2;
  std::map<std::string, std::string> internal_addr;  // node id -> address
  std::map<std::string, std::string> floating_addr;
};

enum class Phase { day0, day1, ready, failed, terminated };
std::string to_string(Phase p);

struct InstantiateOptions {
  bool wireguard = true;
  double flavor_multiplier = 1.0;
  std::string default_site;  // placement fallback; first vim when empty
};

struct TunnelEntry {
  std::string link_name;           // e.g. "S6a"
  std::string iface;               // bound vnfd interface, e.g. "s6a"
  std::string unit_a, unit_b;      // unit_a is the requirer (initiator)
  rel::RelationId relation = 0;
  std::string subnet;              // 10.200.<k>.0/24
  bool established = false;
};

struct CatalogEntry {
  desc::DescriptorPackage pkg;
  int version = 1;
  std::string fingerprint;
};

class NsInstance {
 public:
  std::string id;
  std::string nsd_id;
  InstantiateOptions options;
  Phase phase = Phase::day0;
  std::map<std::string, std::string> placement;        // unit -> site
  std::map<std::string, std::unique_ptr<UnitRuntime>> units;
  std::map<std::string, netem::LinkId> links;          // link name -> fabric id
  std::map<std::string, netem::TapHandle> taps;        // link name -> tap
  std::map<std::string, TunnelEntry> tunnel_registry;  // link name -> tunnel
  int qos_class = 0;

  UnitRuntime& unit(const std::string& name);
  const UnitRuntime& unit(const std::string& name) const;
  template <class T>
  T* app_of(const std::string& name) {
    return unit(name).app_as<T>();
  }
};

struct NsiInstance {
  std::string id;
  std::string nst_id;
  NsInstance* ns = nullptr;
  desc::SliceType slice_type = desc::SliceType::embb;
  desc::QosProfile qos;
  // thresholds derived from the slice type; 0 means not applicable
  double kpi_latency_ms = 0.0;
  double kpi_dl_mbps = 0.0;
};

// Lifecycle engine: sites, catalog, NS/NSI instantiation with placement,
// day-0/1/2 primitives through per-unit proxies, automatic tunnel peering
// over relations, endpoint resolution.
class Orchestrator {
 public:
  Orchestrator(netem::Fabric& fabric, uint64_t seed, EmuOptions opt = {});

  VimHandle& register_vim(const VimConfig& config);
  VimHandle& vim(const std::string& site);
  bool has_vim(const std::string& site) const { return vims_.count(site) > 0; }
  std::vector<std::string> vim_ids() const;

  CatalogEntry& onboard(const desc::DescriptorPackage& pkg);
  const CatalogEntry* catalog_entry(const std::string& nsd_id) const;

  NsInstance& instantiate_ns(const std::string& nsd_id,
                             const std::map<std::string, std::string>& placement,
                             InstantiateOptions options);
  NsiInstance& instantiate_nsi(const std::string& nst_id,
                               const std::map<std::string, std::string>& placement,
                               InstantiateOptions options);

  std::pair<std::string, uint16_t> resolve_endpoint(const NsInstance& ns,
                                                    const std::string& unit,
                                                    const std::string& requesting_site);

  using ActionParams = std::map<std::string, std::string>;
  using ActionResult = std::map<std::string, std::string>;
  ActionResult run_action(NsInstance& ns, const std::string& unit,
                          const std::string& action, const ActionParams& params);

  void terminate(NsInstance& ns);

  NsInstance* find_ns(const std::string& id);
  NsiInstance* find_nsi(const std::string& id);
  std::vector<std::string> ns_ids() const;

  nlohmann::ordered_json ns_show(const NsInstance& ns) const;
  // everything the orchestrator itself holds, serialized; the key-locality
  // test scans this for private key material
  std::string sweep_state_text() const;

  rel::RelationBus& bus() { return bus_; }
  netem::Fabric& fabric() { return fabric_; }
  const EmuOptions& options() const { return opt_; }

 private:
  struct RelationWiring {
    rel::RelationId id = 0;
    std::string name;
    std::string link_name;
    std::string iface;
    std::string requirer;  // unit names
    std::string provider;
  };

  void run_day1(NsInstance& ns);
  void join_wgpeer(NsInstance& ns, const std::string& unit_name);
  void drive_peering(NsInstance& ns);
  void pump_relation_events(NsInstance& ns);
  void apply_remote_bag(NsInstance& ns, const RelationWiring& rel,
                        const std::string& unit_name);
  void cleanup_instance(NsInstance& ns);
  const RelationWiring* wiring_for(const NsInstance& ns,
                                   const std::string& link_name) const;
  netem::NodeTraits traits_for(const desc::Vnfd& vnfd, double multiplier) const;

  netem::Fabric& fabric_;
  crypto::ChaChaRng rng_;
  EmuOptions opt_;
  rel::RelationBus bus_;
  std::map<std::string, VimHandle> vims_;
  std::map<std::string, CatalogEntry> catalog_;
  std::map<std::string, std::unique_ptr<NsInstance>> instances_;
  std::map<std::string, NsiInstance> nsis_;
  std::map<std::string, std::vector<RelationWiring>> wirings_;  // by ns id
  int next_instance_ = 1;
  int next_tunnel_subnet_ = 1;
  int next_qos_class_ = 1;
  int next_site_index_ = 1;
};

}  // namespace sliceguard::orch
