#include <cstdio>

#include "sliceguard/desc/descriptors.hpp"

namespace sliceguard::desc {

std::string to_string(SliceType t) {
  return t == SliceType::embb ? "embb" : "urllc";
}
std::string to_string(RelationRole r) {
  return r == RelationRole::provider ? "provider" : "requirer";
}
std::string to_string(PhaseHint p) {
  switch (p) {
    case PhaseHint::day1: return "day1";
    case PhaseHint::day2: return "day2";
    default: return "both";
  }
}
std::string to_string(ParamType t) {
  switch (t) {
    case ParamType::int_t: return "int";
    case ParamType::bool_t: return "bool";
    default: return "string";
  }
}

namespace {

std::string decimal3(double v) {
  char buf[64];
  snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

bool plain_safe(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-' ||
              c == '/';
    if (!ok) return false;
  }
  // avoid scalars yaml would retype
  if (s == "true" || s == "false" || s == "null") return false;
  if (s.find_first_not_of("0123456789.-") == std::string::npos) return false;
  return true;
}

std::string scalar(const std::string& s) {
  if (plain_safe(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

class Emitter {
 public:
  Emitter& line(int indent, const std::string& text) {
    out_.append(size_t(indent) * 2, ' ');
    out_ += text;
    out_ += '\n';
    return *this;
  }
  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

void emit_string_list(Emitter& e, int indent, const std::string& key,
                      const std::vector<std::string>& items) {
  if (items.empty()) {
    e.line(indent, key + ": []");
    return;
  }
  e.line(indent, key + ":");
  for (const auto& s : items) e.line(indent + 1, "- " + scalar(s));
}

}  // namespace

std::string serialize(const Vnfd& v) {
  Emitter e;
  e.line(0, "vnfd:");
  e.line(1, "id: " + scalar(v.id));
  e.line(1, "vdus:");
  for (const auto& vdu : v.vdus) {
    e.line(2, "- name: " + scalar(vdu.name));
    e.line(3, "vcpus: " + std::to_string(vdu.vcpus));
    e.line(3, "ram_gb: " + decimal3(vdu.ram_gb));
    e.line(3, "storage_gb: " + std::to_string(vdu.storage_gb));
    e.line(3, "image: " + scalar(vdu.image));
  }
  e.line(1, "cloud_init:");
  e.line(2, "admin_user: " + scalar(v.cloud_init.admin_user));
  emit_string_list(e, 2, "packages", v.cloud_init.packages);
  if (v.cloud_init.files.empty()) {
    e.line(2, "files: []");
  } else {
    e.line(2, "files:");
    for (const auto& f : v.cloud_init.files) {
      e.line(3, "- path: " + scalar(f.path));
      e.line(4, "content: " + scalar(f.content));
    }
  }
  e.line(1, "interfaces:");
  for (const auto& i : v.interfaces) {
    e.line(2, "- name: " + scalar(i.name));
    e.line(3, std::string("mgmt: ") + (i.mgmt ? "true" : "false"));
  }
  if (v.actions.empty()) {
    e.line(1, "actions: []");
  } else {
    e.line(1, "actions:");
    for (const auto& a : v.actions) {
      e.line(2, "- name: " + scalar(a.name));
      e.line(3, "phase_hint: " + to_string(a.phase_hint));
      if (a.params.empty()) {
        e.line(3, "params: []");
      } else {
        e.line(3, "params:");
        for (const auto& p : a.params) {
          e.line(4, "- name: " + scalar(p.name));
          e.line(5, "type: " + to_string(p.type));
          e.line(5, std::string("required: ") + (p.required ? "true" : "false"));
        }
      }
    }
  }
  emit_string_list(e, 1, "day1", v.day1_primitives);
  emit_string_list(e, 1, "day2", v.day2_primitives);
  if (v.relations.empty()) {
    e.line(1, "relations: []");
  } else {
    e.line(1, "relations:");
    for (const auto& r : v.relations) {
      e.line(2, "- name: " + scalar(r.name));
      e.line(3, "role: " + to_string(r.role));
      e.line(3, "counterpart: " + scalar(r.counterpart_vnfd));
      e.line(3, "interface: " + scalar(r.bound_interface));
    }
  }
  return std::move(e).str();
}

std::string serialize(const Nsd& n) {
  Emitter e;
  e.line(0, "nsd:");
  e.line(1, "id: " + scalar(n.id));
  e.line(1, "members:");
  for (const auto& m : n.vnf_refs) {
    e.line(2, "- index: " + std::to_string(m.member_index));
    e.line(3, "vnfd: " + scalar(m.vnfd_id));
  }
  if (n.virtual_links.empty()) {
    e.line(1, "links: []");
  } else {
    e.line(1, "links:");
    for (const auto& l : n.virtual_links) {
      e.line(2, "- name: " + scalar(l.name));
      e.line(3, "endpoints:");
      for (const auto& ep : l.endpoints) {
        e.line(4, "- member: " + std::to_string(ep.member_index));
        e.line(5, "interface: " + scalar(ep.interface));
      }
    }
  }
  e.line(1, "flavor_multiplier: " + decimal3(n.flavor_multiplier));
  return std::move(e).str();
}

std::string serialize(const Nst& n) {
  Emitter e;
  e.line(0, "nst:");
  e.line(1, "id: " + scalar(n.id));
  e.line(1, "nsd: " + scalar(n.nsd_ref));
  e.line(1, "slice_type: " + to_string(n.slice_type));
  e.line(1, "qos:");
  e.line(2, "five_qi: " + std::to_string(n.qos.five_qi));
  e.line(2, "latency_budget_ms: " + decimal3(n.qos.latency_budget_ms));
  e.line(2, "dl_target_mbps: " + decimal3(n.qos.dl_target_mbps));
  e.line(2, "priority: " + std::to_string(n.qos.priority));
  emit_string_list(e, 1, "exposed_interfaces", n.exposed_interfaces);
  return std::move(e).str();
}

bool structurally_equal(const Vnfd& a, const Vnfd& b) {
  return serialize(a) == serialize(b);
}
bool structurally_equal(const Nsd& a, const Nsd& b) {
  return serialize(a) == serialize(b);
}
bool structurally_equal(const Nst& a, const Nst& b) {
  return serialize(a) == serialize(b);
}

}  // namespace sliceguard::desc
