#include "sliceguard/orch/orchestrator.hpp"

#include <cmath>
#include <sstream>

#include "sliceguard/crypto/sha256.hpp"

namespace sliceguard::orch {

using nlohmann::ordered_json;

std::string to_string(Phase p) {
  switch (p) {
    case Phase::day0: return "day0";
    case Phase::day1: return "day1";
    case Phase::ready: return "ready";
    case Phase::failed: return "failed";
    case Phase::terminated: return "terminated";
  }
  return "?";
}

UnitRuntime& NsInstance::unit(const std::string& name) {
  auto it = units.find(name);
  if (it == units.end())
    throw UnknownEntity("no unit '" + name + "' in " + id);
  return *it->second;
}

const UnitRuntime& NsInstance::unit(const std::string& name) const {
  auto it = units.find(name);
  if (it == units.end())
    throw UnknownEntity("no unit '" + name + "' in " + id);
  return *it->second;
}

Orchestrator::Orchestrator(netem::Fabric& fabric, uint64_t seed, EmuOptions opt)
    : fabric_(fabric),
      rng_(crypto::ChaChaRng(seed).fork("orchestrator")),
      opt_(std::move(opt)) {
  if (opt_.subscribers.empty()) {
    // default provisioning: three subscribers in the home realm
    for (int i = 0; i < 3; ++i) {
      eps::SubscriberRecord s;
      s.imsi = "00101012345678" + std::to_string(9 - i);
      s.key = from_hex("465b5ce8b199b49faa5f0a2ee238a6b" + std::to_string(i));
      s.apn = opt_.nf.apn;
      s.realm = opt_.nf.realm;
      opt_.subscribers.push_back(std::move(s));
    }
  }
}

VimHandle& Orchestrator::register_vim(const VimConfig& config) {
  if (config.id.empty()) throw std::invalid_argument("vim id must be non-empty");
  if (config.vcpus <= 0 || config.ram_gb <= 0 || config.storage_gb <= 0)
    throw std::invalid_argument("vim capacities must be positive");
  if (vims_.count(config.id)) throw DuplicateSite("site " + config.id + " exists");
  VimHandle handle;
  handle.config = config;
  int n = next_site_index_++;
  handle.internal_prefix = "10.0." + std::to_string(n) + ".";
  handle.floating_prefix = "172.16." + std::to_string(n) + ".";
  fabric_.register_site(config.id);
  return vims_.emplace(config.id, std::move(handle)).first->second;
}

VimHandle& Orchestrator::vim(const std::string& site) {
  auto it = vims_.find(site);
  if (it == vims_.end()) throw UnknownEntity("unknown site " + site);
  return it->second;
}

std::vector<std::string> Orchestrator::vim_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, v] : vims_) out.push_back(id);
  return out;
}

CatalogEntry& Orchestrator::onboard(const desc::DescriptorPackage& pkg) {
  auto findings = desc::validate_package(pkg);
  if (!findings.empty()) throw ValidationFailed(std::move(findings));
  if (!pkg.nsd)
    throw ValidationFailed(
        std::vector<desc::ValidationFinding>{{"nsd", "package carries no nsd"}});

  std::string text;
  for (const auto& v : pkg.vnfds) text += desc::serialize(v);
  text += desc::serialize(*pkg.nsd);
  for (const auto& n : pkg.nsts) text += desc::serialize(n);
  std::string fp = to_hex(crypto::sha256(to_bytes(text)));

  auto it = catalog_.find(pkg.nsd->id);
  if (it == catalog_.end()) {
    CatalogEntry entry{pkg, 1, fp};
    return catalog_.emplace(pkg.nsd->id, std::move(entry)).first->second;
  }
  if (it->second.fingerprint != fp) {
    it->second.pkg = pkg;
    it->second.fingerprint = fp;
    it->second.version += 1;
  }
  return it->second;
}

const CatalogEntry* Orchestrator::catalog_entry(const std::string& nsd_id) const {
  auto it = catalog_.find(nsd_id);
  return it == catalog_.end() ? nullptr : &it->second;
}

netem::NodeTraits Orchestrator::traits_for(const desc::Vnfd& vnfd,
                                           double multiplier) const {
  int vcpus = 0;
  for (const auto& vdu : vnfd.vdus) vcpus += vdu.vcpus;
  vcpus = int(std::lround(vcpus * multiplier));
  netem::NodeTraits t;
  t.vcpus = vcpus;
  t.proc_rate_mbps = vcpus * opt_.per_vcpu_rate_mbps;
  t.crypto_rate_mbps = vcpus * opt_.crypto_rate_per_vcpu_mbps;
  return t;
}

NsInstance& Orchestrator::instantiate_ns(
    const std::string& nsd_id, const std::map<std::string, std::string>& placement,
    InstantiateOptions options) {
  const CatalogEntry* entry = catalog_entry(nsd_id);
  if (!entry) throw UnknownEntity("nsd '" + nsd_id + "' not onboarded");
  const desc::DescriptorPackage& pkg = entry->pkg;
  const desc::Nsd& nsd = *pkg.nsd;
  if (vims_.empty()) throw UnknownEntity("no vim registered");

  double multiplier = options.flavor_multiplier > 0
                          ? options.flavor_multiplier * nsd.flavor_multiplier
                          : nsd.flavor_multiplier;
  std::string default_site =
      options.default_site.empty() ? vims_.begin()->first : options.default_site;

  auto inst = std::make_unique<NsInstance>();
  NsInstance& ns = *inst;
  ns.id = nsd_id + "-" + std::to_string(next_instance_++);
  ns.nsd_id = nsd_id;
  ns.options = options;
  ns.options.flavor_multiplier = multiplier;

  // resolve placement and check resources per site
  std::map<std::string, VimUsage> want;
  for (const auto& member : nsd.vnf_refs) {
    const desc::Vnfd* vnfd = pkg.find_vnfd(member.vnfd_id);
    auto it = placement.find(member.vnfd_id);
    std::string site = it != placement.end() ? it->second : default_site;
    if (!vims_.count(site)) throw UnknownEntity("unknown site " + site);
    ns.placement[member.vnfd_id] = site;
    VimUsage& u = want[site];
    for (const auto& vdu : vnfd->vdus) {
      u.vcpus += int(std::lround(vdu.vcpus * multiplier));
      u.ram_gb += vdu.ram_gb * multiplier;
      u.storage_gb += int(std::lround(vdu.storage_gb * multiplier));
    }
  }
  for (const auto& [site, u] : want) {
    const VimHandle& v = vims_.at(site);
    if (v.used.vcpus + u.vcpus > v.config.vcpus ||
        v.used.ram_gb + u.ram_gb > v.config.ram_gb ||
        v.used.storage_gb + u.storage_gb > v.config.storage_gb)
      throw InsufficientResources("site " + site + " cannot host " + ns.id);
  }
  for (const auto& [site, u] : want) {
    VimHandle& v = vims_.at(site);
    v.used.vcpus += u.vcpus;
    v.used.ram_gb += u.ram_gb;
    v.used.storage_gb += u.storage_gb;
  }

  instances_.emplace(ns.id, std::move(inst));
  try {
    // nodes + addressing
    for (const auto& member : nsd.vnf_refs) {
      const desc::Vnfd& vnfd = *pkg.find_vnfd(member.vnfd_id);
      const std::string& site = ns.placement.at(member.vnfd_id);
      VimHandle& v = vims_.at(site);
      std::string node_id = ns.id + "." + member.vnfd_id;
      fabric_.add_node(node_id, site, traits_for(vnfd, multiplier));
      v.internal_addr[node_id] = v.internal_prefix + std::to_string(v.next_host);
      v.floating_addr[node_id] = v.floating_prefix + std::to_string(v.next_host);
      v.next_host += 1;
      auto unit = std::make_unique<UnitRuntime>(
          node_id, member.vnfd_id, vnfd, site, fabric_,
          rng_.fork("unit/" + node_id), opt_, ns.qos_class);
      ns.units.emplace(member.vnfd_id, std::move(unit));
      bus_.register_unit(node_id);
    }

    // virtual links
    for (const auto& link : nsd.virtual_links) {
      const desc::NsdMember* ma = nsd.find_member(link.endpoints[0].member_index);
      const desc::NsdMember* mb = nsd.find_member(link.endpoints[1].member_index);
      std::string node_a = ns.id + "." + ma->vnfd_id;
      std::string node_b = ns.id + "." + mb->vnfd_id;
      netem::LinkParams params = opt_.intra_site_link;
      if (link.name == "Uu") params = opt_.uu_link;
      netem::LinkId link_id = ns.id + "." + link.name;
      fabric_.add_link(link_id, {node_a, link.endpoints[0].interface},
                       {node_b, link.endpoints[1].interface}, params);
      ns.links[link.name] = link_id;
      ns.taps[link.name] = fabric_.attach_tap(link_id);
    }

    // ports + relation wiring
    std::vector<RelationWiring>& wirings = wirings_[ns.id];
    for (const auto& link : nsd.virtual_links) {
      const desc::NsdMember* ma = nsd.find_member(link.endpoints[0].member_index);
      const desc::NsdMember* mb = nsd.find_member(link.endpoints[1].member_index);
      const desc::Vnfd& vnfd_a = *pkg.find_vnfd(ma->vnfd_id);
      UnitRuntime& ua = ns.unit(ma->vnfd_id);
      UnitRuntime& ub = ns.unit(mb->vnfd_id);
      bool cross = ua.site() != ub.site();

      // a relation covers this link when both sides bind its interfaces
      const desc::RelationSpec* rel_a = nullptr;
      for (const auto& r : vnfd_a.relations) {
        if (r.bound_interface == link.endpoints[0].interface &&
            r.counterpart_vnfd == mb->vnfd_id)
          rel_a = &r;
      }
      bool tunneled = ns.options.wireguard && rel_a != nullptr;

      ua.add_port({link.endpoints[0].interface, ns.links[link.name], link.name,
                   ub.node_id(), mb->vnfd_id, tunneled, cross});
      ub.add_port({link.endpoints[1].interface, ns.links[link.name], link.name,
                   ua.node_id(), ma->vnfd_id, tunneled, cross});

      if (rel_a) {
        rel::RelationId rid =
            bus_.create_relation(rel_a->name, ua.node_id(), ub.node_id());
        RelationWiring w;
        w.id = rid;
        w.name = rel_a->name;
        w.link_name = link.name;
        w.iface = rel_a->bound_interface;
        if (rel_a->role == desc::RelationRole::requirer) {
          w.requirer = ua.name();
          w.provider = ub.name();
        } else {
          w.requirer = ub.name();
          w.provider = ua.name();
        }
        wirings.push_back(w);
        if (tunneled) {
          TunnelEntry entry;
          entry.link_name = link.name;
          entry.iface = rel_a->bound_interface;
          entry.unit_a = w.requirer;
          entry.unit_b = w.provider;
          entry.relation = rid;
          entry.subnet = "10.200." + std::to_string(next_tunnel_subnet_++) + ".0/24";
          ns.tunnel_registry[link.name] = entry;
        }
        bus_.join(rid, ua.node_id());
        bus_.join(rid, ub.node_id());
      }
    }

    // apps by unit role
    for (auto& [name, unit] : ns.units) {
      if (name == "hss") {
        auto hss = std::make_unique<eps::HssApp>(opt_.nf);
        for (const auto& s : opt_.subscribers) hss->provision(s);
        unit->set_app(std::move(hss));
      } else if (name == "mme") {
        unit->set_app(std::make_unique<eps::MmeApp>(opt_.nf));
      } else if (name == "spgwc") {
        unit->set_app(std::make_unique<eps::SpgwcApp>(opt_.nf));
      } else if (name == "spgwu") {
        unit->set_app(std::make_unique<eps::SpgwuApp>());
      } else if (name == "enb") {
        unit->set_app(std::make_unique<eps::EnbApp>());
      } else if (name == "ue") {
        unit->set_app(std::make_unique<eps::UeApp>());
      }
      NsInstance* inst_ptr = &ns;
      std::string unit_name = name;
      unit->set_session_callback([this, inst_ptr, unit_name](const std::string& iface) {
        for (auto& [link_name, entry] : inst_ptr->tunnel_registry) {
          if (entry.iface == iface &&
              (entry.unit_a == unit_name || entry.unit_b == unit_name)) {
            bool a = inst_ptr->unit(entry.unit_a).session_established(iface);
            bool b = inst_ptr->unit(entry.unit_b).session_established(iface);
            entry.established = a && b;
          }
        }
      });
    }

    // day-0: cloud-init
    for (auto& [name, unit] : ns.units) {
      std::vector<std::string> packages = unit->vnfd().cloud_init.packages;
      if (ns.options.wireguard) packages.push_back("wireguard");
      unit->apply_day0(unit->vnfd().cloud_init.admin_user, std::move(packages));
    }

    ns.phase = Phase::day1;
    run_day1(ns);
    if (ns.options.wireguard) drive_peering(ns);
    ns.phase = Phase::ready;
  } catch (...) {
    cleanup_instance(ns);
    ns.phase = Phase::failed;
    throw;
  }
  return ns;
}

// "create relations" hook: bus units must exist before create_relation
// runs, so registration happens as part of unit construction above. The
// lifecycle keeps relation creation inside the same instantiate step.

void Orchestrator::run_day1(NsInstance& ns) {
  const desc::Nsd& nsd = *catalog_.at(ns.nsd_id).pkg.nsd;
  for (const auto& member : nsd.vnf_refs) {
    UnitRuntime& unit = ns.unit(member.vnfd_id);
    for (const std::string& action : unit.vnfd().day1_primitives) {
      try {
        if (action == "start-service") {
          unit.start_service();
        } else if (action == "join-wgpeer") {
          if (ns.options.wireguard) join_wgpeer(ns, member.vnfd_id);
        } else {
          throw ActionFailed("unit runtime does not implement '" + action + "'");
        }
      } catch (const std::exception& e) {
        throw Day1Failure(member.vnfd_id, action, e.what());
      }
    }
  }
}

void Orchestrator::join_wgpeer(NsInstance& ns, const std::string& unit_name) {
  UnitRuntime& unit = ns.unit(unit_name);
  for (const auto& [link_name, entry] : ns.tunnel_registry) {
    if (entry.unit_a != unit_name && entry.unit_b != unit_name) continue;
    const std::string& other =
        entry.unit_a == unit_name ? entry.unit_b : entry.unit_a;
    const std::string& iface = entry.iface;

    // the unit hands its public key to the proxy; the private key stays put
    Key32 pub = unit.ensure_port_key(iface);

    // subnet 10.200.k.0/24: requirer gets .1, provider .2
    std::string base = entry.subnet.substr(0, entry.subnet.rfind('.'));
    std::string address =
        base + (entry.unit_a == unit_name ? ".1" : ".2") + "/24";
    uint16_t port = uint16_t(opt_.listen_port_base +
                             std::distance(ns.tunnel_registry.begin(),
                                           ns.tunnel_registry.find(link_name)));
    unit.configure_port(iface, port, address);

    // endpoint resolution runs centrally: units never self-report externals
    auto [host, unused_port] = resolve_endpoint(ns, unit_name, ns.placement.at(other));
    (void)unused_port;
    bus_.publish(entry.relation, unit.node_id(),
                 {{"public_key", tunnel::encode_key(pub)},
                  {"endpoint_host", host},
                  {"endpoint_port", std::to_string(port)},
                  {"tunnel_address", address},
                  {"allowed_cidrs", address.substr(0, address.rfind('/')) + "/32"}});
  }
}

void Orchestrator::pump_relation_events(NsInstance& ns) {
  const std::vector<RelationWiring>& wirings = wirings_.at(ns.id);
  for (const auto& [unit_name, unit] : ns.units) {
    while (auto ev = bus_.next_event(unit->node_id())) {
      if (ev->kind != rel::EventKind::changed) continue;
      for (const auto& w : wirings) {
        if (w.id == ev->relation) apply_remote_bag(ns, w, unit_name);
      }
    }
  }
}

void Orchestrator::apply_remote_bag(NsInstance& ns, const RelationWiring& rel,
                                    const std::string& unit_name) {
  rel::RelationDataBag bag = bus_.read_remote(rel.id, ns.unit(unit_name).node_id());
  const std::string* pub = bag.find("public_key");
  const std::string* host = bag.find("endpoint_host");
  const std::string* port = bag.find("endpoint_port");
  const std::string* address = bag.find("tunnel_address");
  const std::string* cidrs = bag.find("allowed_cidrs");
  if (!pub || !host || !port || !address || !cidrs) return;  // incomplete

  tunnel::PeerDescriptor desc;
  desc.remote_public = tunnel::decode_key(*pub);
  desc.endpoint_host = *host;
  desc.endpoint_port = uint16_t(std::stoi(*port));
  desc.tunnel_address = *address;
  desc.allowed_cidrs = {*cidrs};
  ns.unit(unit_name).apply_peer(rel.iface, desc, unit_name == rel.requirer);
}

void Orchestrator::drive_peering(NsInstance& ns) {
  SimTime deadline = fabric_.clock().now() + opt_.peering_timeout;
  while (true) {
    bool events = false;
    for (const auto& [unit_name, unit] : ns.units) {
      if (bus_.has_events(unit->node_id())) events = true;
    }
    if (events) pump_relation_events(ns);
    size_t processed = fabric_.run_until_idle();

    bool all = true;
    for (const auto& [link_name, entry] : ns.tunnel_registry) {
      if (!entry.established) all = false;
    }
    if (all) return;
    if (!events && processed == 0) break;  // no progress possible
    if (fabric_.clock().now() > deadline) break;
  }
  if (fabric_.clock().now() < deadline) fabric_.clock().advance_to(deadline);
  for (const auto& [link_name, entry] : ns.tunnel_registry) {
    if (!entry.established) {
      const RelationWiring* w = wiring_for(ns, link_name);
      throw PeeringTimeout(w ? w->name : link_name);
    }
  }
}

const Orchestrator::RelationWiring* Orchestrator::wiring_for(
    const NsInstance& ns, const std::string& link_name) const {
  auto it = wirings_.find(ns.id);
  if (it == wirings_.end()) return nullptr;
  for (const auto& w : it->second) {
    if (w.link_name == link_name) return &w;
  }
  return nullptr;
}

std::pair<std::string, uint16_t> Orchestrator::resolve_endpoint(
    const NsInstance& ns, const std::string& unit,
    const std::string& requesting_site) {
  auto it = ns.placement.find(unit);
  if (it == ns.placement.end()) throw UnknownEntity("unknown unit " + unit);
  const std::string& site = it->second;
  const VimHandle& v = vims_.at(site);
  std::string node_id = ns.id + "." + unit;
  uint16_t port = 0;
  const UnitRuntime& u = ns.unit(unit);
  for (const auto& iface : u.port_names()) {
    if (u.listen_port(iface) != 0) port = u.listen_port(iface);
  }
  if (requesting_site == site) return {v.internal_addr.at(node_id), port};
  return {v.floating_addr.at(node_id), port};
}

NsiInstance& Orchestrator::instantiate_nsi(
    const std::string& nst_id, const std::map<std::string, std::string>& placement,
    InstantiateOptions options) {
  const desc::Nst* nst = nullptr;
  for (const auto& [nsd_id, entry] : catalog_) {
    if (const desc::Nst* n = entry.pkg.find_nst(nst_id)) nst = n;
  }
  if (!nst) throw UnknownEntity("nst '" + nst_id + "' not onboarded");

  options.wireguard = true;  // slices always ride encrypted interfaces
  NsInstance& ns = instantiate_ns(nst->nsd_ref, placement, options);

  NsiInstance nsi;
  nsi.id = nst_id + "-" + ns.id;
  nsi.nst_id = nst_id;
  nsi.ns = &ns;
  nsi.slice_type = nst->slice_type;
  nsi.qos = nst->qos;
  if (nst->slice_type == desc::SliceType::urllc) nsi.kpi_latency_ms = 1.0;
  if (nst->slice_type == desc::SliceType::embb) nsi.kpi_dl_mbps = 100.0;

  // apply the slice's qos class to its links (and the intersite carrier)
  ns.qos_class = next_qos_class_++;
  int weight = std::max(1, 128 / std::max(1, nst->qos.priority));
  for (auto& [name, unit] : ns.units) unit->set_qos_class(ns.qos_class);
  for (const auto& [link_name, link_id] : ns.links)
    fabric_.set_class_weight(link_id, ns.qos_class, weight);

  return nsis_.emplace(nsi.id, std::move(nsi)).first->second;
}

Orchestrator::ActionResult Orchestrator::run_action(NsInstance& ns,
                                                    const std::string& unit_name,
                                                    const std::string& action,
                                                    const ActionParams& params) {
  if (ns.phase != Phase::ready)
    throw NotReady("ns " + ns.id + " is " + to_string(ns.phase));
  UnitRuntime& unit = ns.unit(unit_name);
  const desc::Vnfd& vnfd = unit.vnfd();
  bool declared = false;
  for (const auto& a : vnfd.day2_primitives) declared |= (a == action);
  if (!declared)
    throw UnknownAction("action '" + action + "' not in day-2 list of " + unit_name);

  auto need = [&](const std::string& key) -> const std::string& {
    auto it = params.find(key);
    if (it == params.end()) throw ActionFailed("missing param '" + key + "'");
    return it->second;
  };

  if (action == "add-peer") {
    const std::string& iface = need("interface");
    tunnel::PeerDescriptor desc;
    desc.remote_public = tunnel::decode_key(need("public_key"));
    desc.endpoint_host = need("endpoint_host");
    desc.endpoint_port = uint16_t(std::stoi(need("endpoint_port")));
    desc.tunnel_address = params.count("tunnel_address")
                              ? params.at("tunnel_address")
                              : unit.tunnel_address(iface);
    desc.allowed_cidrs = {desc.tunnel_address};
    uint32_t before = unit.session_generation(iface);
    unit.add_extra_peer(iface, desc);
    fabric_.run_until_idle();
    if (unit.session_generation(iface) == before)
      throw ActionFailed("handshake with added peer did not complete");
    return {{"result", "peer-added"},
            {"session_index",
             std::to_string(unit.session_snapshot(iface)->local_index())}};
  }

  if (action == "rotate-key") {
    const std::string& iface = need("interface");
    TunnelEntry* entry = nullptr;
    for (auto& [link_name, e] : ns.tunnel_registry) {
      if (e.iface == iface) entry = &e;
    }
    if (!entry) throw ActionFailed("no tunnel on interface " + iface);
    Key32 pub = unit.rotate_key(iface);
    entry->established = false;

    // republish; the counterpart re-handshakes off its changed event
    const std::string& other =
        entry->unit_a == unit_name ? entry->unit_b : entry->unit_a;
    auto [host, unused_port] = resolve_endpoint(ns, unit_name, ns.placement.at(other));
    (void)unused_port;
    bus_.publish(entry->relation, unit.node_id(),
                 {{"public_key", tunnel::encode_key(pub)},
                  {"endpoint_host", host}});
    pump_relation_events(ns);
    if (entry->unit_a == unit_name) unit.reinitiate(iface);
    fabric_.run_until_idle();
    if (!entry->established)
      throw ActionFailed("rotate-key re-handshake did not complete");
    return {{"result", "key-rotated"}, {"public_key", tunnel::encode_key(pub)}};
  }

  throw ActionFailed("unit runtime does not implement '" + action + "'");
}

void Orchestrator::cleanup_instance(NsInstance& ns) {
  for (auto& [name, unit] : ns.units) unit->drop_sessions();
  auto wir = wirings_.find(ns.id);
  if (wir != wirings_.end()) {
    for (const auto& w : wir->second) bus_.depart(w.id);
  }
  for (const auto& [link_name, link_id] : ns.links) fabric_.remove_link(link_id);
  ns.links.clear();
  for (auto& [name, unit] : ns.units) fabric_.remove_node(unit->node_id());

  // release site resources
  const CatalogEntry* entry = catalog_entry(ns.nsd_id);
  if (entry) {
    for (const auto& [unit_name, site] : ns.placement) {
      const desc::Vnfd* vnfd = entry->pkg.find_vnfd(unit_name);
      if (!vnfd || !vims_.count(site)) continue;
      VimHandle& v = vims_.at(site);
      for (const auto& vdu : vnfd->vdus) {
        v.used.vcpus -= int(std::lround(vdu.vcpus * ns.options.flavor_multiplier));
        v.used.ram_gb -= vdu.ram_gb * ns.options.flavor_multiplier;
        v.used.storage_gb -=
            int(std::lround(vdu.storage_gb * ns.options.flavor_multiplier));
      }
      std::string node_id = ns.id + "." + unit_name;
      v.internal_addr.erase(node_id);
      v.floating_addr.erase(node_id);
    }
  }
  ns.placement.clear();
}

void Orchestrator::terminate(NsInstance& ns) {
  if (ns.phase == Phase::terminated) return;
  fabric_.run_until_idle();
  cleanup_instance(ns);
  ns.tunnel_registry.clear();
  ns.phase = Phase::terminated;
}

NsInstance* Orchestrator::find_ns(const std::string& id) {
  auto it = instances_.find(id);
  return it == instances_.end() ? nullptr : it->second.get();
}

NsiInstance* Orchestrator::find_nsi(const std::string& id) {
  auto it = nsis_.find(id);
  return it == nsis_.end() ? nullptr : &it->second;
}

std::vector<std::string> Orchestrator::ns_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, inst] : instances_) out.push_back(id);
  return out;
}

ordered_json Orchestrator::ns_show(const NsInstance& ns) const {
  ordered_json j;
  j["id"] = ns.id;
  j["nsd"] = ns.nsd_id;
  j["phase"] = to_string(ns.phase);
  j["wireguard"] = ns.options.wireguard;
  j["flavor_multiplier"] = ns.options.flavor_multiplier;
  ordered_json placement = ordered_json::object();
  for (const auto& [unit, site] : ns.placement) placement[unit] = site;
  j["placement"] = placement;
  ordered_json units = ordered_json::array();
  for (const auto& [name, unit] : ns.units) {
    ordered_json u;
    u["name"] = name;
    u["node"] = unit->node_id();
    u["site"] = unit->site();
    u["admin_user"] = unit->admin_user();
    u["packages"] = unit->day0_packages();
    units.push_back(u);
  }
  j["units"] = units;
  ordered_json tunnels = ordered_json::array();
  for (const auto& [link_name, entry] : ns.tunnel_registry) {
    ordered_json t;
    t["link"] = link_name;
    t["interface"] = entry.iface;
    t["initiator"] = entry.unit_a;
    t["responder"] = entry.unit_b;
    t["subnet"] = entry.subnet;
    t["established"] = entry.established;
    tunnels.push_back(t);
  }
  j["tunnels"] = tunnels;
  return j;
}

std::string Orchestrator::sweep_state_text() const {
  std::ostringstream out;
  for (const auto& [id, inst] : instances_) out << ns_show(*inst).dump();
  for (const auto& [id, entry] : catalog_) {
    for (const auto& v : entry.pkg.vnfds) out << desc::serialize(v);
    if (entry.pkg.nsd) out << desc::serialize(*entry.pkg.nsd);
    for (const auto& n : entry.pkg.nsts) out << desc::serialize(n);
  }
  for (const auto& [id, inst] : instances_) {
    auto wir = wirings_.find(id);
    if (wir == wirings_.end()) continue;
    for (const auto& w : wir->second) {
      const rel::RelationInstance& rel = bus_.relation(w.id);
      for (const auto* bag : {&rel.bag_a, &rel.bag_b}) {
        for (const auto& [k, v] : bag->entries) out << k << "=" << v << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace sliceguard::orch
