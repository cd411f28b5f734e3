#include <yaml-cpp/yaml.h>

#include <set>

#include "sliceguard/desc/descriptors.hpp"

namespace sliceguard::desc {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& path,
                       const std::string& what) {
  (void)node;
  throw SchemaError(path, what);
}

void require_keys(const YAML::Node& map, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw SchemaError(path, "expected a mapping");
  for (const auto& kv : map) {
    std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw SchemaError(path, "unknown key '" + key + "'");
  }
}

std::string str_field(const YAML::Node& map, const std::string& path,
                      const std::string& key, bool required = true) {
  YAML::Node n = map[key];
  if (!n) {
    if (required) throw SchemaError(path, "missing field '" + key + "'");
    return {};
  }
  if (!n.IsScalar()) throw SchemaError(path + "." + key, "expected a scalar");
  return n.as<std::string>();
}

int int_field(const YAML::Node& map, const std::string& path,
              const std::string& key) {
  YAML::Node n = map[key];
  if (!n) throw SchemaError(path, "missing field '" + key + "'");
  try {
    return n.as<int>();
  } catch (const YAML::Exception&) {
    throw SchemaError(path + "." + key, "expected an integer");
  }
}

double decimal_field(const YAML::Node& map, const std::string& path,
                     const std::string& key) {
  YAML::Node n = map[key];
  if (!n) throw SchemaError(path, "missing field '" + key + "'");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw SchemaError(path + "." + key, "expected a decimal");
  }
}

bool bool_field(const YAML::Node& map, const std::string& path,
                const std::string& key, bool fallback) {
  YAML::Node n = map[key];
  if (!n) return fallback;
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    throw SchemaError(path + "." + key, "expected a boolean");
  }
}

YAML::Node load_root(const std::string& document, const std::string& top_key) {
  YAML::Node root;
  try {
    root = YAML::Load(document);
  } catch (const YAML::ParserException& e) {
    throw SyntaxError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  require_keys(root, "(document)", {top_key});
  YAML::Node body = root[top_key];
  if (!body) throw SchemaError("(document)", "missing top-level '" + top_key + "'");
  return body;
}

VduSpec parse_vdu(const YAML::Node& n, const std::string& path) {
  require_keys(n, path, {"name", "vcpus", "ram_gb", "storage_gb", "image"});
  VduSpec v;
  v.name = str_field(n, path, "name");
  v.vcpus = int_field(n, path, "vcpus");
  v.ram_gb = decimal_field(n, path, "ram_gb");
  v.storage_gb = int_field(n, path, "storage_gb");
  v.image = str_field(n, path, "image");
  if (v.vcpus < 1) fail(n, path + ".vcpus", "must be >= 1");
  if (v.ram_gb <= 0) fail(n, path + ".ram_gb", "must be > 0");
  if (v.storage_gb <= 0) fail(n, path + ".storage_gb", "must be > 0");
  return v;
}

Day0Config parse_day0(const YAML::Node& n, const std::string& path) {
  require_keys(n, path, {"admin_user", "packages", "files"});
  Day0Config c;
  c.admin_user = str_field(n, path, "admin_user");
  if (c.admin_user.empty()) fail(n, path + ".admin_user", "must be non-empty");
  if (YAML::Node pkgs = n["packages"]) {
    if (!pkgs.IsSequence()) fail(n, path + ".packages", "expected a sequence");
    for (const auto& p : pkgs) c.packages.push_back(p.as<std::string>());
  }
  if (YAML::Node files = n["files"]) {
    if (!files.IsSequence()) fail(n, path + ".files", "expected a sequence");
    int i = 0;
    for (const auto& f : files) {
      std::string fpath = path + ".files[" + std::to_string(i++) + "]";
      require_keys(f, fpath, {"path", "content"});
      c.files.push_back({str_field(f, fpath, "path"), str_field(f, fpath, "content")});
    }
  }
  return c;
}

ActionSpec parse_action(const YAML::Node& n, const std::string& path) {
  require_keys(n, path, {"name", "params", "phase_hint"});
  ActionSpec a;
  a.name = str_field(n, path, "name");
  std::string phase = str_field(n, path, "phase_hint", false);
  if (phase.empty() || phase == "both") {
    a.phase_hint = PhaseHint::both;
  } else if (phase == "day1") {
    a.phase_hint = PhaseHint::day1;
  } else if (phase == "day2") {
    a.phase_hint = PhaseHint::day2;
  } else {
    fail(n, path + ".phase_hint", "must be day1, day2 or both");
  }
  std::set<std::string> seen;
  if (YAML::Node params = n["params"]) {
    if (!params.IsSequence()) fail(n, path + ".params", "expected a sequence");
    int i = 0;
    for (const auto& p : params) {
      std::string ppath = path + ".params[" + std::to_string(i++) + "]";
      require_keys(p, ppath, {"name", "type", "required"});
      ActionParam ap;
      ap.name = str_field(p, ppath, "name");
      std::string type = str_field(p, ppath, "type", false);
      if (type.empty() || type == "string") {
        ap.type = ParamType::string_t;
      } else if (type == "int") {
        ap.type = ParamType::int_t;
      } else if (type == "bool") {
        ap.type = ParamType::bool_t;
      } else {
        fail(p, ppath + ".type", "must be string, int or bool");
      }
      ap.required = bool_field(p, ppath, "required", false);
      if (!seen.insert(ap.name).second)
        fail(p, ppath + ".name", "duplicate param '" + ap.name + "'");
      a.params.push_back(ap);
    }
  }
  return a;
}

RelationSpec parse_relation(const YAML::Node& n, const std::string& path) {
  require_keys(n, path, {"name", "role", "counterpart", "interface"});
  RelationSpec r;
  r.name = str_field(n, path, "name");
  std::string role = str_field(n, path, "role");
  if (role == "provider") {
    r.role = RelationRole::provider;
  } else if (role == "requirer") {
    r.role = RelationRole::requirer;
  } else {
    fail(n, path + ".role", "must be provider or requirer");
  }
  r.counterpart_vnfd = str_field(n, path, "counterpart");
  r.bound_interface = str_field(n, path, "interface");
  return r;
}

std::vector<std::string> parse_string_list(const YAML::Node& n,
                                           const std::string& path) {
  std::vector<std::string> out;
  if (!n) return out;
  if (!n.IsSequence()) throw SchemaError(path, "expected a sequence");
  for (const auto& item : n) out.push_back(item.as<std::string>());
  return out;
}

}  // namespace

Vnfd parse_vnfd(const std::string& document) {
  YAML::Node body = load_root(document, "vnfd");
  require_keys(body, "vnfd",
               {"id", "vdus", "cloud_init", "interfaces", "actions", "day1",
                "day2", "relations"});
  Vnfd v;
  v.id = str_field(body, "vnfd", "id");

  YAML::Node vdus = body["vdus"];
  if (!vdus || !vdus.IsSequence() || vdus.size() == 0)
    throw SchemaError("vnfd.vdus", "at least one vdu required");
  std::set<std::string> vdu_names;
  int i = 0;
  for (const auto& n : vdus) {
    std::string path = "vnfd.vdus[" + std::to_string(i++) + "]";
    VduSpec vdu = parse_vdu(n, path);
    if (!vdu_names.insert(vdu.name).second)
      throw SchemaError(path + ".name", "duplicate vdu '" + vdu.name + "'");
    v.vdus.push_back(vdu);
  }

  if (YAML::Node ci = body["cloud_init"]) {
    v.cloud_init = parse_day0(ci, "vnfd.cloud_init");
  } else {
    throw SchemaError("vnfd", "missing field 'cloud_init'");
  }

  YAML::Node ifaces = body["interfaces"];
  if (!ifaces || !ifaces.IsSequence())
    throw SchemaError("vnfd.interfaces", "expected a sequence");
  int mgmt_count = 0;
  i = 0;
  for (const auto& n : ifaces) {
    std::string path = "vnfd.interfaces[" + std::to_string(i++) + "]";
    require_keys(n, path, {"name", "mgmt"});
    InterfaceSpec spec{str_field(n, path, "name"), bool_field(n, path, "mgmt", false)};
    if (spec.mgmt) ++mgmt_count;
    if (v.find_interface(spec.name))
      throw SchemaError(path, "duplicate interface '" + spec.name + "'");
    v.interfaces.push_back(spec);
  }
  if (mgmt_count != 1)
    throw SchemaError("vnfd.interfaces",
                      "exactly one management interface required, found " +
                          std::to_string(mgmt_count));

  if (YAML::Node actions = body["actions"]) {
    if (!actions.IsSequence())
      throw SchemaError("vnfd.actions", "expected a sequence");
    i = 0;
    for (const auto& n : actions) {
      std::string path = "vnfd.actions[" + std::to_string(i++) + "]";
      ActionSpec a = parse_action(n, path);
      if (v.find_action(a.name))
        throw SchemaError(path, "duplicate action '" + a.name + "'");
      v.actions.push_back(a);
    }
  }

  v.day1_primitives = parse_string_list(body["day1"], "vnfd.day1");
  v.day2_primitives = parse_string_list(body["day2"], "vnfd.day2");
  for (const auto& [list, label] :
       {std::pair{&v.day1_primitives, "day1"}, {&v.day2_primitives, "day2"}}) {
    int j = 0;
    for (const auto& name : *list) {
      if (!v.find_action(name))
        throw SchemaError("vnfd." + std::string(label) + "[" + std::to_string(j) + "]",
                          "references undeclared action '" + name + "'");
      ++j;
    }
  }

  if (YAML::Node rels = body["relations"]) {
    if (!rels.IsSequence())
      throw SchemaError("vnfd.relations", "expected a sequence");
    i = 0;
    for (const auto& n : rels) {
      std::string path = "vnfd.relations[" + std::to_string(i++) + "]";
      RelationSpec r = parse_relation(n, path);
      if (!v.find_interface(r.bound_interface))
        throw SchemaError(path + ".interface",
                          "unknown interface '" + r.bound_interface + "'");
      v.relations.push_back(r);
    }
  }
  return v;
}

Nsd parse_nsd(const std::string& document) {
  YAML::Node body = load_root(document, "nsd");
  require_keys(body, "nsd", {"id", "members", "links", "flavor_multiplier"});
  Nsd nsd;
  nsd.id = str_field(body, "nsd", "id");

  YAML::Node members = body["members"];
  if (!members || !members.IsSequence() || members.size() == 0)
    throw SchemaError("nsd.members", "at least one member required");
  int i = 0;
  for (const auto& n : members) {
    std::string path = "nsd.members[" + std::to_string(i++) + "]";
    require_keys(n, path, {"index", "vnfd"});
    NsdMember m{int_field(n, path, "index"), str_field(n, path, "vnfd")};
    if (nsd.find_member(m.member_index))
      throw SchemaError(path + ".index", "duplicate member index");
    nsd.vnf_refs.push_back(m);
  }

  std::set<std::string> link_names;
  if (YAML::Node links = body["links"]) {
    if (!links.IsSequence()) throw SchemaError("nsd.links", "expected a sequence");
    i = 0;
    for (const auto& n : links) {
      std::string path = "nsd.links[" + std::to_string(i++) + "]";
      require_keys(n, path, {"name", "endpoints"});
      VirtualLink link;
      link.name = str_field(n, path, "name");
      if (!link_names.insert(link.name).second)
        throw SchemaError(path + ".name", "duplicate link '" + link.name + "'");
      YAML::Node eps = n["endpoints"];
      if (!eps || !eps.IsSequence() || eps.size() != 2)
        throw SchemaError(path + ".endpoints", "exactly two endpoints required");
      int j = 0;
      for (const auto& e : eps) {
        std::string epath = path + ".endpoints[" + std::to_string(j++) + "]";
        require_keys(e, epath, {"member", "interface"});
        link.endpoints.push_back(
            {int_field(e, epath, "member"), str_field(e, epath, "interface")});
      }
      nsd.virtual_links.push_back(link);
    }
  }

  if (body["flavor_multiplier"]) {
    nsd.flavor_multiplier = decimal_field(body, "nsd", "flavor_multiplier");
    if (nsd.flavor_multiplier < 1.0)
      throw SchemaError("nsd.flavor_multiplier", "must be >= 1");
  }
  return nsd;
}

Nst parse_nst(const std::string& document) {
  YAML::Node body = load_root(document, "nst");
  require_keys(body, "nst",
               {"id", "nsd", "slice_type", "qos", "exposed_interfaces"});
  Nst nst;
  nst.id = str_field(body, "nst", "id");
  nst.nsd_ref = str_field(body, "nst", "nsd");
  std::string st = str_field(body, "nst", "slice_type");
  if (st == "embb") {
    nst.slice_type = SliceType::embb;
  } else if (st == "urllc") {
    nst.slice_type = SliceType::urllc;
  } else {
    throw SchemaError("nst.slice_type", "must be embb or urllc");
  }

  YAML::Node qos = body["qos"];
  if (!qos) throw SchemaError("nst", "missing field 'qos'");
  require_keys(qos, "nst.qos",
               {"five_qi", "latency_budget_ms", "dl_target_mbps", "priority"});
  nst.qos.five_qi = int_field(qos, "nst.qos", "five_qi");
  nst.qos.latency_budget_ms = decimal_field(qos, "nst.qos", "latency_budget_ms");
  nst.qos.dl_target_mbps = decimal_field(qos, "nst.qos", "dl_target_mbps");
  nst.qos.priority = int_field(qos, "nst.qos", "priority");
  if (nst.qos.five_qi <= 0) throw SchemaError("nst.qos.five_qi", "must be positive");
  if (nst.qos.latency_budget_ms <= 0)
    throw SchemaError("nst.qos.latency_budget_ms", "must be positive");
  if (nst.qos.dl_target_mbps <= 0)
    throw SchemaError("nst.qos.dl_target_mbps", "must be positive");
  if (nst.qos.priority <= 0) throw SchemaError("nst.qos.priority", "must be positive");

  nst.exposed_interfaces =
      parse_string_list(body["exposed_interfaces"], "nst.exposed_interfaces");
  return nst;
}

}  // namespace sliceguard::desc
