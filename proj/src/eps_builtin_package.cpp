#include "sliceguard/eps/builtin_package.hpp"

namespace sliceguard::eps {

namespace {

using namespace sliceguard::desc;

ActionSpec action(const std::string& name, PhaseHint phase,
                  std::vector<ActionParam> params = {}) {
  return ActionSpec{name, std::move(params), phase};
}

std::vector<ActionSpec> standard_actions(bool with_tunnel) {
  std::vector<ActionSpec> out;
  out.push_back(action("start-service", PhaseHint::day1));
  if (with_tunnel) {
    out.push_back(action("join-wgpeer", PhaseHint::day1,
                         {{"interface", ParamType::string_t, false}}));
    out.push_back(action("add-peer", PhaseHint::day2,
                         {{"interface", ParamType::string_t, true},
                          {"public_key", ParamType::string_t, true},
                          {"endpoint_host", ParamType::string_t, true},
                          {"endpoint_port", ParamType::int_t, true}}));
    out.push_back(action("rotate-key", PhaseHint::day2,
                         {{"interface", ParamType::string_t, true}}));
  }
  return out;
}

Vnfd make_vnfd(const std::string& id, int vcpus, double ram_gb, int storage_gb,
               const std::string& package,
               std::vector<InterfaceSpec> interfaces,
               std::vector<RelationSpec> relations) {
  Vnfd v;
  v.id = id;
  v.vdus.push_back(VduSpec{id + "-vdu", vcpus, ram_gb, storage_gb,
                           "ubuntu18.04-" + id});
  v.cloud_init.admin_user = "ubuntu";
  v.cloud_init.packages = {package};
  v.interfaces = std::move(interfaces);
  v.relations = std::move(relations);
  bool with_tunnel = !v.relations.empty();
  v.actions = standard_actions(with_tunnel);
  v.day1_primitives = {"start-service"};
  if (with_tunnel) {
    v.day1_primitives.push_back("join-wgpeer");
    v.day2_primitives = {"add-peer", "rotate-key"};
  }
  return v;
}

}  // namespace

desc::DescriptorPackage builtin_eps_package() {
  DescriptorPackage pkg;

  Vnfd hss = make_vnfd(
      "hss", 4, 8.0, 20, "oai-hss",
      {{"mgmt", true}, {"s6a", false}},
      {{"wgpeer-s6a", RelationRole::provider, "mme", "s6a"}});
  hss.cloud_init.files.push_back(
      {"/etc/oai/hss.conf",
       "realm=epc.mnc001.mcc001.3gppnetwork.org\nhostname=hss.epc.mnc001.mcc001."
       "3gppnetwork.org\n"});
  pkg.vnfds.push_back(hss);

  pkg.vnfds.push_back(make_vnfd(
      "mme", 2, 4.0, 20, "oai-mme",
      {{"mgmt", true}, {"s1c", false}, {"s6a", false}, {"s11", false}},
      {{"wgpeer-s6a", RelationRole::requirer, "hss", "s6a"},
       {"wgpeer-s1c", RelationRole::provider, "enb", "s1c"},
       {"wgpeer-s11", RelationRole::requirer, "spgwc", "s11"}}));

  pkg.vnfds.push_back(make_vnfd(
      "spgwc", 3, 4.0, 30, "oai-spgwc",
      {{"mgmt", true}, {"s11", false}, {"sx", false}},
      {{"wgpeer-s11", RelationRole::provider, "mme", "s11"},
       {"wgpeer-sx", RelationRole::requirer, "spgwu", "sx"}}));

  pkg.vnfds.push_back(make_vnfd(
      "spgwu", 1, 3.0, 20, "oai-spgwu",
      {{"mgmt", true}, {"s1u", false}, {"sx", false}},
      {{"wgpeer-s1u", RelationRole::provider, "enb", "s1u"},
       {"wgpeer-sx", RelationRole::provider, "spgwc", "sx"}}));

  pkg.vnfds.push_back(make_vnfd(
      "enb", 4, 8.0, 20, "oai-enb",
      {{"mgmt", true}, {"s1c", false}, {"s1u", false}, {"uu", false}},
      {{"wgpeer-s1c", RelationRole::requirer, "mme", "s1c"},
       {"wgpeer-s1u", RelationRole::requirer, "spgwu", "s1u"}}));

  // the UE rides the emulated air interface; no encrypted peering
  pkg.vnfds.push_back(make_vnfd("ue", 2, 4.0, 20, "oai-ue-sim",
                                {{"mgmt", true}, {"uu", false}}, {}));

  Nsd nsd;
  nsd.id = "oai-eps";
  nsd.vnf_refs = {{1, "hss"}, {2, "mme"}, {3, "spgwc"},
                  {4, "spgwu"}, {5, "enb"}, {6, "ue"}};
  nsd.virtual_links = {
      {"S6a", {{2, "s6a"}, {1, "s6a"}}},
      {"S1-C", {{5, "s1c"}, {2, "s1c"}}},
      {"S1-U", {{5, "s1u"}, {4, "s1u"}}},
      {"S11", {{2, "s11"}, {3, "s11"}}},
      {"Sx", {{3, "sx"}, {4, "sx"}}},
      {"Uu", {{6, "uu"}, {5, "uu"}}},
  };
  pkg.nsd = nsd;

  Nst embb;
  embb.id = "eps-embb";
  embb.nsd_ref = "oai-eps";
  embb.slice_type = SliceType::embb;
  embb.qos = QosProfile{9, 300.0, 100.0, 90};
  for (int i = 1; i <= 6; ++i)
    embb.exposed_interfaces.push_back(std::to_string(i) + ":mgmt");
  pkg.nsts.push_back(embb);

  Nst urllc = embb;
  urllc.id = "eps-urllc";
  urllc.slice_type = SliceType::urllc;
  urllc.qos = QosProfile{82, 10.0, 50.0, 19};
  pkg.nsts.push_back(urllc);

  return pkg;
}

}  // namespace sliceguard::eps
