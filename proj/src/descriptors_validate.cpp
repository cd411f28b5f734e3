#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sliceguard/desc/descriptors.hpp"

namespace sliceguard::desc {

std::vector<ValidationFinding> validate_package(const DescriptorPackage& pkg) {
  std::vector<ValidationFinding> findings;
  auto add = [&](const std::string& path, const std::string& msg) {
    findings.push_back({path, msg});
  };

  std::set<std::string> vnfd_ids;
  for (const auto& v : pkg.vnfds) {
    if (!vnfd_ids.insert(v.id).second)
      add("vnfd/" + v.id, "duplicate vnfd id");
  }

  // relation declarations must pair up provider<->requirer across vnfds
  for (const auto& v : pkg.vnfds) {
    int i = 0;
    for (const auto& r : v.relations) {
      std::string path = "vnfd/" + v.id + ".relations[" + std::to_string(i++) + "]";
      const Vnfd* other = pkg.find_vnfd(r.counterpart_vnfd);
      if (!other) {
        add(path, "counterpart vnfd '" + r.counterpart_vnfd + "' not in package");
        continue;
      }
      bool matched = false;
      for (const auto& rr : other->relations) {
        if (rr.name == r.name && rr.counterpart_vnfd == v.id && rr.role != r.role)
          matched = true;
      }
      if (!matched)
        add(path, "unmatched relation role: no complementary '" + r.name +
                      "' declared by '" + r.counterpart_vnfd + "'");
    }
  }

  if (pkg.nsd) {
    const Nsd& nsd = *pkg.nsd;
    int i = 0;
    for (const auto& m : nsd.vnf_refs) {
      std::string path = "nsd.members[" + std::to_string(i++) + "]";
      if (!pkg.find_vnfd(m.vnfd_id))
        add(path, "references unknown vnfd '" + m.vnfd_id + "'");
    }
    i = 0;
    for (const auto& link : nsd.virtual_links) {
      std::string path = "nsd.links[" + std::to_string(i++) + "]";
      int j = 0;
      for (const auto& ep : link.endpoints) {
        std::string epath = path + ".endpoints[" + std::to_string(j++) + "]";
        const NsdMember* m = nsd.find_member(ep.member_index);
        if (!m) {
          add(epath, "references undeclared member " + std::to_string(ep.member_index));
          continue;
        }
        const Vnfd* v = pkg.find_vnfd(m->vnfd_id);
        if (v && !v->find_interface(ep.interface))
          add(epath, "vnfd '" + m->vnfd_id + "' has no interface '" +
                         ep.interface + "'");
      }
    }
  }

  for (const auto& nst : pkg.nsts) {
    std::string path = "nst/" + nst.id;
    if (!pkg.nsd || pkg.nsd->id != nst.nsd_ref) {
      add(path, "references unknown nsd '" + nst.nsd_ref + "'");
      continue;
    }
    int i = 0;
    for (const auto& exposed : nst.exposed_interfaces) {
      std::string epath = path + ".exposed_interfaces[" + std::to_string(i++) + "]";
      auto colon = exposed.find(':');
      if (colon == std::string::npos) {
        add(epath, "expected '<member>:<interface>'");
        continue;
      }
      int member = 0;
      try {
        member = std::stoi(exposed.substr(0, colon));
      } catch (const std::exception&) {
        add(epath, "expected numeric member index");
        continue;
      }
      std::string iface = exposed.substr(colon + 1);
      const NsdMember* m = pkg.nsd->find_member(member);
      if (!m) {
        add(epath, "references undeclared member " + std::to_string(member));
        continue;
      }
      const Vnfd* v = pkg.find_vnfd(m->vnfd_id);
      if (!v) continue;  // already reported via nsd member check
      const InterfaceSpec* spec = v->find_interface(iface);
      if (!spec) {
        add(epath, "vnfd '" + m->vnfd_id + "' has no interface '" + iface + "'");
      } else if (!spec->mgmt) {
        add(epath, "exposed interface '" + iface + "' is not a management interface");
      }
    }
  }

  return findings;
}

DescriptorPackage load_package_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  DescriptorPackage pkg;
  fs::path vnfd_dir = dir / "vnfd";
  if (fs::is_directory(vnfd_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(vnfd_dir)) {
      if (entry.path().extension() == ".yaml") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) pkg.vnfds.push_back(parse_vnfd(slurp(f)));
  }
  if (fs::exists(dir / "nsd.yaml")) pkg.nsd = parse_nsd(slurp(dir / "nsd.yaml"));
  fs::path nst_dir = dir / "nst";
  if (fs::is_directory(nst_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(nst_dir)) {
      if (entry.path().extension() == ".yaml") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) pkg.nsts.push_back(parse_nst(slurp(f)));
  }
  return pkg;
}

void write_package_dir(const DescriptorPackage& pkg,
                       const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "vnfd");
  fs::create_directories(dir / "nst");
  for (const auto& v : pkg.vnfds) {
    std::ofstream out(dir / "vnfd" / (v.id + ".yaml"));
    out << serialize(v);
  }
  if (pkg.nsd) {
    std::ofstream out(dir / "nsd.yaml");
    out << serialize(*pkg.nsd);
  }
  for (const auto& n : pkg.nsts) {
    std::ofstream out(dir / "nst" / (n.id + ".yaml"));
    out << serialize(n);
  }
}

}  // namespace sliceguard::desc
