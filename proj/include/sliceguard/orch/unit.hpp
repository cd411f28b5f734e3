#pragma once

#include <functional>
#include <memory>

#include "sliceguard/desc/schema.hpp"
#include "sliceguard/eps/nf.hpp"
#include "sliceguard/netem/fabric.hpp"
#include "sliceguard/rel/bus.hpp"
#include "sliceguard/tunnel/handshake.hpp"

namespace sliceguard::orch {

using tunnel::SimTime;
using tunnel::kMillisecond;
using tunnel::kSecond;

struct NotReady : std::runtime_error {
  explicit NotReady(const std::string& what) : std::runtime_error(what) {}
};
struct TunnelNotEstablished : NotReady {
  explicit TunnelNotEstablished(const std::string& iface)
      : NotReady("no tunnel session on interface " + iface) {}
};

// Emulation constants shared by the orchestrator and its units.
struct EmuOptions {
  double per_vcpu_rate_mbps = 500.0;
  double crypto_rate_per_vcpu_mbps = 2000.0;
  netem::LinkParams intra_site_link{20000.0, 0.15, 0.0, 0.0};
  netem::LinkParams uu_link{2.0, 2.0, 0.0, 0.0};
  SimTime lan_crypto_fixed = 0;  // per seal/open op on same-site tunnels
  SimTime wan_crypto_fixed = 0;  // per seal/open op on cross-site tunnels
  SimTime peering_timeout = 10 * kSecond;
  size_t tunnel_payload_limit = 1420;  // inner app bytes per frame
  uint16_t listen_port_base = 51820;
  eps::NfSettings nf;
  std::vector<eps::SubscriberRecord> subscribers;
};

// One emulated VNF unit: node-local state (static keys, sessions, NF
// behavior) plus per-interface tunnel ports. Private key material never
// leaves this object.
class UnitRuntime final : public eps::UnitServices {
 public:
  UnitRuntime(std::string node_id, std::string name, const desc::Vnfd& vnfd,
              std::string site, netem::Fabric& fabric, crypto::ChaChaRng rng,
              const EmuOptions& opt, int qos_class);

  struct PortInfo {
    std::string iface;
    netem::LinkId link;
    std::string link_name;
    netem::NodeId peer_node;
    std::string peer_unit;
    bool tunneled = false;
    bool cross_site = false;
  };

  void add_port(const PortInfo& info);
  bool has_port(const std::string& iface) const;
  std::vector<std::string> port_names() const;

  void set_app(std::unique_ptr<eps::NfApp> app);
  eps::NfApp* app() { return app_.get(); }
  template <class T>
  T* app_as() {
    return dynamic_cast<T*>(app_.get());
  }

  // fired whenever a tunnel session is installed on an interface
  void set_session_callback(std::function<void(const std::string& iface)> cb) {
    session_cb_ = std::move(cb);
  }
  // first look at every delivered app message; return true to consume
  using ProbeHook = std::function<bool(const std::string& iface,
                                       const eps::EpsMessage&, SimTime)>;
  void set_probe_hook(ProbeHook hook) { probe_hook_ = std::move(hook); }
  // raw-byte variant, checked before message decoding (probe streams)
  using RawHook = std::function<bool(const std::string& iface,
                                     std::span<const uint8_t>, SimTime)>;
  void set_raw_hook(RawHook hook) { raw_hook_ = std::move(hook); }
  // sends opaque bytes through the port (and its tunnel, when enabled)
  void send_raw(const std::string& iface, const Bytes& payload);

  // charm-driven lifecycle
  void apply_day0(const std::string& admin_user,
                  std::vector<std::string> packages);
  void start_service();
  bool started() const { return started_; }
  Key32 ensure_port_key(const std::string& iface);
  void configure_port(const std::string& iface, uint16_t listen_port,
                      const std::string& tunnel_address);
  // Relation-driven peer apply; idempotent per remote public key. When the
  // key differs from the current peer the port re-handshakes.
  void apply_peer(const std::string& iface, const tunnel::PeerDescriptor& desc,
                  bool initiate);
  // Day-2 add-peer: installs an extra descriptor and handshakes now.
  void add_extra_peer(const std::string& iface, const tunnel::PeerDescriptor& desc);
  Key32 rotate_key(const std::string& iface);
  // fresh handshake toward the configured relation peer
  void reinitiate(const std::string& iface);

  bool session_established(const std::string& iface) const;
  uint32_t session_generation(const std::string& iface) const;
  std::optional<tunnel::TransportSession> session_snapshot(
      const std::string& iface) const;
  uint16_t listen_port(const std::string& iface) const;
  const std::string& tunnel_address(const std::string& iface) const;
  void drop_sessions();

  // eps::UnitServices
  void send_message(const std::string& iface, const eps::EpsMessage& msg,
                    SimTime service_occupancy = 0) override;
  SimTime now() const override;
  const std::string& role_name() const override { return name_; }

  void on_delivery(const netem::Delivery& d);

  const std::string& node_id() const { return node_id_; }
  const std::string& name() const { return name_; }
  const std::string& site() const { return site_; }
  const desc::Vnfd& vnfd() const { return vnfd_; }
  int qos_class() const { return qos_class_; }
  void set_qos_class(int qos_class) { qos_class_ = qos_class; }
  const std::vector<std::string>& day0_packages() const { return day0_packages_; }
  const std::string& admin_user() const { return admin_user_; }
  int rejected_frames() const { return rejected_frames_; }

  // test support: what must never leak outside the unit
  std::vector<Key32> private_key_material() const;

 private:
  struct Port {
    PortInfo info;
    std::optional<tunnel::StaticKeypair> keys;
    uint16_t listen_port = 0;
    std::string tunnel_address;
    std::vector<tunnel::PeerDescriptor> peers;  // [0] is the relation peer
    std::map<uint32_t, tunnel::HandshakeState> pending;
    std::optional<tunnel::TransportSession> session;
    tunnel::InitiatorTimestamps seen;
    uint32_t generation = 0;
    uint32_t tx_seq = 0;
    // in-order reassembly of fragmented app messages
    Bytes rx_buffer;
    uint16_t rx_expected_index = 0;
  };

  Port& port(const std::string& iface);
  const Port& port(const std::string& iface) const;
  void port_send(Port& p, const Bytes& app_payload, SimTime service_occupancy);
  void send_wire(Port& p, Bytes wire, uint64_t app_bits, bool crypto,
                 SimTime service_occupancy);
  void initiate_handshake(Port& p, const tunnel::PeerDescriptor& desc);
  void handle_initiation(Port& p, std::span<const uint8_t> wire);
  void handle_response(Port& p, std::span<const uint8_t> wire);
  void handle_transport(Port& p, std::span<const uint8_t> wire);
  void accept_inner(Port& p, std::span<const uint8_t> inner);
  void dispatch_app(Port& p, const Bytes& message);
  void install_session(Port& p, tunnel::TransportSession session);
  SimTime handshake_now();
  SimTime crypto_fixed(const Port& p) const {
    return p.info.cross_site ? opt_.wan_crypto_fixed : opt_.lan_crypto_fixed;
  }

  std::string node_id_;
  std::string name_;
  desc::Vnfd vnfd_;
  std::string site_;
  netem::Fabric& fabric_;
  crypto::ChaChaRng rng_;
  const EmuOptions& opt_;
  int qos_class_ = 0;

  std::map<std::string, Port> ports_;
  std::unique_ptr<eps::NfApp> app_;
  std::function<void(const std::string&)> session_cb_;
  ProbeHook probe_hook_;
  RawHook raw_hook_;
  bool started_ = false;
  std::string admin_user_;
  std::vector<std::string> day0_packages_;
  int rejected_frames_ = 0;
  SimTime last_handshake_time_ = -1;
};

}  // namespace sliceguard::orch
