#include "sliceguard/orch/unit.hpp"

#include "sliceguard/tunnel/errors.hpp"

namespace sliceguard::orch {

namespace {
constexpr size_t kPortHeaderSize = 8;  // seq(4) frag_index(2) frag_count(2)

void put_port_header(Bytes& out, uint32_t seq, uint16_t index, uint16_t count) {
  uint8_t hdr[kPortHeaderSize];
  store_le32(hdr, seq);
  hdr[4] = uint8_t(index);
  hdr[5] = uint8_t(index >> 8);
  hdr[6] = uint8_t(count);
  hdr[7] = uint8_t(count >> 8);
  out.insert(out.end(), hdr, hdr + kPortHeaderSize);
}
}  // namespace

UnitRuntime::UnitRuntime(std::string node_id, std::string name,
                         const desc::Vnfd& vnfd, std::string site,
                         netem::Fabric& fabric, crypto::ChaChaRng rng,
                         const EmuOptions& opt, int qos_class)
    : node_id_(std::move(node_id)),
      name_(std::move(name)),
      vnfd_(vnfd),
      site_(std::move(site)),
      fabric_(fabric),
      rng_(std::move(rng)),
      opt_(opt),
      qos_class_(qos_class) {
  fabric_.set_handler(node_id_, [this](const netem::Delivery& d) { on_delivery(d); });
}

void UnitRuntime::add_port(const PortInfo& info) {
  Port p;
  p.info = info;
  ports_.emplace(info.iface, std::move(p));
}

bool UnitRuntime::has_port(const std::string& iface) const {
  return ports_.count(iface) > 0;
}

std::vector<std::string> UnitRuntime::port_names() const {
  std::vector<std::string> out;
  for (const auto& [name, p] : ports_) out.push_back(name);
  return out;
}

void UnitRuntime::set_app(std::unique_ptr<eps::NfApp> app) { app_ = std::move(app); }

UnitRuntime::Port& UnitRuntime::port(const std::string& iface) {
  auto it = ports_.find(iface);
  if (it == ports_.end())
    throw std::out_of_range(name_ + " has no port " + iface);
  return it->second;
}

const UnitRuntime::Port& UnitRuntime::port(const std::string& iface) const {
  auto it = ports_.find(iface);
  if (it == ports_.end())
    throw std::out_of_range(name_ + " has no port " + iface);
  return it->second;
}

void UnitRuntime::apply_day0(const std::string& admin_user,
                             std::vector<std::string> packages) {
  admin_user_ = admin_user;
  day0_packages_ = std::move(packages);
}

void UnitRuntime::start_service() {
  started_ = true;
  if (app_) app_->start(*this);
}

Key32 UnitRuntime::ensure_port_key(const std::string& iface) {
  Port& p = port(iface);
  if (!p.keys) p.keys = tunnel::generate_keypair(rng_);
  return p.keys->public_key;
}

void UnitRuntime::configure_port(const std::string& iface, uint16_t listen_port,
                                 const std::string& tunnel_address) {
  Port& p = port(iface);
  p.listen_port = listen_port;
  p.tunnel_address = tunnel_address;
}

void UnitRuntime::apply_peer(const std::string& iface,
                             const tunnel::PeerDescriptor& desc, bool initiate) {
  desc.validate();
  Port& p = port(iface);
  if (!p.peers.empty() && p.peers[0].remote_public == desc.remote_public) {
    // same key: refresh endpoint data only, no new handshake
    p.peers[0] = desc;
    return;
  }
  if (p.peers.empty()) {
    p.peers.push_back(desc);
  } else {
    p.peers[0] = desc;  // counterpart rotated its key
    p.session.reset();
  }
  if (initiate) initiate_handshake(p, desc);
}

void UnitRuntime::add_extra_peer(const std::string& iface,
                                 const tunnel::PeerDescriptor& desc) {
  desc.validate();
  Port& p = port(iface);
  p.peers.push_back(desc);
  initiate_handshake(p, desc);
}

Key32 UnitRuntime::rotate_key(const std::string& iface) {
  Port& p = port(iface);
  p.keys = tunnel::generate_keypair(rng_);
  p.session.reset();
  p.pending.clear();
  return p.keys->public_key;
}

bool UnitRuntime::session_established(const std::string& iface) const {
  return port(iface).session.has_value();
}

uint32_t UnitRuntime::session_generation(const std::string& iface) const {
  return port(iface).generation;
}

std::optional<tunnel::TransportSession> UnitRuntime::session_snapshot(
    const std::string& iface) const {
  return port(iface).session;
}

uint16_t UnitRuntime::listen_port(const std::string& iface) const {
  return port(iface).listen_port;
}

const std::string& UnitRuntime::tunnel_address(const std::string& iface) const {
  return port(iface).tunnel_address;
}

void UnitRuntime::drop_sessions() {
  for (auto& [name, p] : ports_) {
    p.session.reset();
    p.pending.clear();
  }
}

SimTime UnitRuntime::now() const { return fabric_.clock().now(); }

SimTime UnitRuntime::handshake_now() {
  SimTime t = std::max(now(), last_handshake_time_ + 1);
  last_handshake_time_ = t;
  return t;
}

void UnitRuntime::send_message(const std::string& iface,
                               const eps::EpsMessage& msg,
                               SimTime service_occupancy) {
  port_send(port(iface), eps::encode(msg), service_occupancy);
}

void UnitRuntime::send_raw(const std::string& iface, const Bytes& payload) {
  port_send(port(iface), payload, 0);
}

void UnitRuntime::port_send(Port& p, const Bytes& app_payload,
                            SimTime service_occupancy) {
  const size_t limit = opt_.tunnel_payload_limit;
  size_t count = std::max<size_t>(1, (app_payload.size() + limit - 1) / limit);
  if (count > 0xffff) throw std::length_error("message too large to fragment");
  uint32_t seq = p.tx_seq++;
  for (size_t i = 0; i < count; ++i) {
    size_t off = i * limit;
    size_t len = std::min(limit, app_payload.size() - off);
    Bytes inner;
    inner.reserve(kPortHeaderSize + len);
    put_port_header(inner, seq, uint16_t(i), uint16_t(count));
    inner.insert(inner.end(), app_payload.begin() + off,
                 app_payload.begin() + off + len);
    SimTime service = i == 0 ? service_occupancy : 0;
    if (p.info.tunneled) {
      if (!p.session) throw TunnelNotEstablished(p.info.iface);
      tunnel::TransportFrame frame = p.session->seal(inner, now());
      uint64_t app_bits = inner.size() * 8;
      send_wire(p, tunnel::encode(frame), app_bits, true, service);
    } else {
      uint64_t app_bits = inner.size() * 8;
      send_wire(p, std::move(inner), app_bits, false, service);
    }
  }
}

void UnitRuntime::send_wire(Port& p, Bytes wire, uint64_t app_bits, bool crypto,
                            SimTime service_occupancy) {
  netem::SendOptions options;
  options.qos_class = qos_class_;
  options.app_bits = app_bits;
  options.src_service = service_occupancy;
  if (crypto) {
    uint64_t frame_bits = wire.size() * 8;
    options.src_crypto_bits = frame_bits;
    options.dst_crypto_bits = frame_bits;
    options.src_fixed = crypto_fixed(p);
    options.dst_fixed = crypto_fixed(p);
  }
  fabric_.send(node_id_, p.info.iface, p.info.peer_node, std::move(wire), options);
}

void UnitRuntime::initiate_handshake(Port& p, const tunnel::PeerDescriptor& desc) {
  if (!p.keys) p.keys = tunnel::generate_keypair(rng_);
  auto result = tunnel::initiate(*p.keys, desc.remote_public, desc.preshared_key,
                                 handshake_now(), rng_);
  while (p.pending.count(result.state.local_index) ||
         (p.session && p.session->local_index() == result.state.local_index)) {
    result = tunnel::initiate(*p.keys, desc.remote_public, desc.preshared_key,
                              handshake_now(), rng_);
  }
  uint32_t index = result.state.local_index;
  p.pending.emplace(index, std::move(result.state));
  Bytes wire = tunnel::encode(result.frame);
  uint64_t bits = wire.size() * 8;
  send_wire(p, std::move(wire), bits, true, 0);
}

void UnitRuntime::reinitiate(const std::string& iface) {
  Port& p = port(iface);
  if (p.peers.empty())
    throw std::logic_error(name_ + " has no peer configured on " + iface);
  initiate_handshake(p, p.peers[0]);
}

void UnitRuntime::install_session(Port& p, tunnel::TransportSession session) {
  p.session = std::move(session);
  p.generation += 1;
  if (session_cb_) session_cb_(p.info.iface);
}

void UnitRuntime::on_delivery(const netem::Delivery& d) {
  auto it = ports_.find(d.dst_iface);
  if (it == ports_.end()) return;
  Port& p = it->second;
  if (!p.info.tunneled) {
    accept_inner(p, d.payload);
    return;
  }
  if (d.payload.empty()) {
    ++rejected_frames_;
    return;
  }
  switch (d.payload[0]) {
    case 1: handle_initiation(p, d.payload); break;
    case 2: handle_response(p, d.payload); break;
    case 4: handle_transport(p, d.payload); break;
    default:
      // plaintext or garbage injected on an encrypted interface
      ++rejected_frames_;
  }
}

void UnitRuntime::handle_initiation(Port& p, std::span<const uint8_t> wire) {
  if (!p.keys) {
    ++rejected_frames_;
    return;
  }
  try {
    tunnel::InitiationFrame frame = tunnel::decode_initiation(wire);
    Key32 psk{};
    // all peers on a port share the relation psk (default all-zero)
    if (!p.peers.empty()) psk = p.peers[0].preshared_key;
    tunnel::RespondResult result =
        tunnel::respond(*p.keys, psk, frame, p.seen, now(), rng_);
    bool known = false;
    for (const auto& peer : p.peers) {
      if (peer.remote_public == result.initiator_static) known = true;
    }
    if (!known) {
      ++rejected_frames_;
      return;
    }
    Bytes response = tunnel::encode(result.frame);
    uint64_t bits = response.size() * 8;
    send_wire(p, std::move(response), bits, true, 0);
    install_session(p, std::move(result.session));
  } catch (const tunnel::TunnelError&) {
    ++rejected_frames_;
  }
}

void UnitRuntime::handle_response(Port& p, std::span<const uint8_t> wire) {
  try {
    tunnel::ResponseFrame frame = tunnel::decode_response(wire);
    auto it = p.pending.find(frame.receiver_index);
    if (it == p.pending.end()) {
      ++rejected_frames_;
      return;
    }
    tunnel::TransportSession session = tunnel::finalize(it->second, frame, now());
    p.pending.erase(it);
    install_session(p, std::move(session));
  } catch (const tunnel::TunnelError&) {
    ++rejected_frames_;
  }
}

void UnitRuntime::handle_transport(Port& p, std::span<const uint8_t> wire) {
  try {
    tunnel::TransportFrame frame = tunnel::decode_transport(wire);
    if (!p.session || p.session->local_index() != frame.receiver_index) {
      ++rejected_frames_;
      return;
    }
    Bytes inner = p.session->open(frame, now());
    accept_inner(p, inner);
  } catch (const tunnel::TunnelError&) {
    ++rejected_frames_;
  }
}

void UnitRuntime::accept_inner(Port& p, std::span<const uint8_t> inner) {
  if (inner.size() < kPortHeaderSize) {
    ++rejected_frames_;
    return;
  }
  uint16_t index = uint16_t(inner[4]) | uint16_t(inner[5]) << 8;
  uint16_t count = uint16_t(inner[6]) | uint16_t(inner[7]) << 8;
  std::span<const uint8_t> chunk = inner.subspan(kPortHeaderSize);
  if (count <= 1) {
    dispatch_app(p, Bytes(chunk.begin(), chunk.end()));
    return;
  }
  if (index != p.rx_expected_index) {
    // lost or reordered fragment; restart reassembly
    p.rx_buffer.clear();
    p.rx_expected_index = 0;
    if (index != 0) return;
  }
  p.rx_buffer.insert(p.rx_buffer.end(), chunk.begin(), chunk.end());
  p.rx_expected_index = uint16_t(index + 1);
  if (index + 1 == count) {
    Bytes message = std::move(p.rx_buffer);
    p.rx_buffer = {};
    p.rx_expected_index = 0;
    dispatch_app(p, message);
  }
}

void UnitRuntime::dispatch_app(Port& p, const Bytes& message) {
  if (raw_hook_ && raw_hook_(p.info.iface, message, now())) return;
  eps::EpsMessage msg;
  try {
    msg = eps::decode(message);
  } catch (const eps::CodecError&) {
    ++rejected_frames_;
    return;
  }
  if (probe_hook_ && probe_hook_(p.info.iface, msg, now())) return;
  if (msg.kind == eps::MsgKind::EchoRequest && msg.find("probe")) {
    eps::EpsMessage reply = msg;
    reply.kind = eps::MsgKind::EchoReply;
    port_send(p, eps::encode(reply), 0);
    return;
  }
  if (!started_ || !app_) return;
  app_->on_message(*this, p.info.iface, msg);
}

std::vector<Key32> UnitRuntime::private_key_material() const {
  std::vector<Key32> out;
  for (const auto& [name, p] : ports_) {
    if (p.keys) out.push_back(p.keys->private_key);
  }
  return out;
}

}  // namespace sliceguard::orch
