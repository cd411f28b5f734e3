#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sliceguard::desc {

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct SchemaError : std::runtime_error {
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path(path) {}
  std::string path;
};

struct VduSpec {
  std::string name;
  int vcpus = 1;
  double ram_gb = 1.0;
  int storage_gb = 1;
  std::string image;
};

struct Day0File {
  std::string path;
  std::string content;
};

struct Day0Config {
  std::string admin_user;
  std::vector<std::string> packages;
  std::vector<Day0File> files;
};

enum class ParamType { string_t, int_t, bool_t };
enum class PhaseHint { day1, day2, both };

struct ActionParam {
  std::string name;
  ParamType type = ParamType::string_t;
  bool required = false;
};

struct ActionSpec {
  std::string name;
  std::vector<ActionParam> params;
  PhaseHint phase_hint = PhaseHint::both;
};

enum class RelationRole { provider, requirer };

struct RelationSpec {
  std::string name;
  RelationRole role = RelationRole::provider;
  std::string counterpart_vnfd;
  std::string bound_interface;
};

struct InterfaceSpec {
  std::string name;
  bool mgmt = false;
};

struct Vnfd {
  std::string id;
  std::vector<VduSpec> vdus;
  Day0Config cloud_init;
  std::vector<std::string> day1_primitives;  // ordered
  std::vector<std::string> day2_primitives;
  std::vector<ActionSpec> actions;
  std::vector<RelationSpec> relations;
  std::vector<InterfaceSpec> interfaces;

  const ActionSpec* find_action(const std::string& name) const {
    for (const auto& a : actions)
      if (a.name == name) return &a;
    return nullptr;
  }
  const InterfaceSpec* find_interface(const std::string& name) const {
    for (const auto& i : interfaces)
      if (i.name == name) return &i;
    return nullptr;
  }
};

struct NsdMember {
  int member_index = 0;
  std::string vnfd_id;
};

struct LinkEndpoint {
  int member_index = 0;
  std::string interface;
};

struct VirtualLink {
  std::string name;
  std::vector<LinkEndpoint> endpoints;
};

struct Nsd {
  std::string id;
  std::vector<NsdMember> vnf_refs;
  std::vector<VirtualLink> virtual_links;
  double flavor_multiplier = 1.0;

  const NsdMember* find_member(int index) const {
    for (const auto& m : vnf_refs)
      if (m.member_index == index) return &m;
    return nullptr;
  }
};

struct QosProfile {
  int five_qi = 9;
  double latency_budget_ms = 300.0;
  double dl_target_mbps = 100.0;
  int priority = 90;
};

enum class SliceType { embb, urllc };

struct Nst {
  std::string id;
  std::string nsd_ref;
  SliceType slice_type = SliceType::embb;
  QosProfile qos;
  std::vector<std::string> exposed_interfaces;  // "<member>:<interface>"
};

struct DescriptorPackage {
  std::vector<Vnfd> vnfds;
  std::optional<Nsd> nsd;
  std::vector<Nst> nsts;

  const Vnfd* find_vnfd(const std::string& id) const {
    for (const auto& v : vnfds)
      if (v.id == id) return &v;
    return nullptr;
  }
  const Nst* find_nst(const std::string& id) const {
    for (const auto& n : nsts)
      if (n.id == id) return &n;
    return nullptr;
  }
};

struct ValidationFinding {
  std::string path;   // e.g. "nsd.links[2].endpoints[0]"
  std::string message;
};

std::string to_string(SliceType t);
std::string to_string(RelationRole r);
std::string to_string(PhaseHint p);
std::string to_string(ParamType t);

}  // namespace sliceguard::desc
