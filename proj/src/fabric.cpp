#include "sliceguard/netem/fabric.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <thread>

#include "sliceguard/tunnel/errors.hpp"
#include "sliceguard/tunnel/frame.hpp"
#include "sliceguard/tunnel/handshake.hpp"

namespace sliceguard::netem {

namespace {
// Site-level sessions are infrastructure and outlive any scenario; give
// them generous limits instead of the per-interface defaults.
tunnel::SessionLimits intersite_limits() {
  tunnel::SessionLimits l;
  l.rekey_after = 3600 * kSecond;
  l.expire_after = 7200 * kSecond;
  return l;
}

bool contains(std::span<const uint8_t> haystack, std::span<const uint8_t> needle) {
  if (needle.empty()) return true;
  if (needle.size() > haystack.size()) return false;
  const uint8_t* end = haystack.data() + haystack.size() - needle.size() + 1;
  for (const uint8_t* p = haystack.data(); p != end; ++p) {
    if (std::memcmp(p, needle.data(), needle.size()) == 0) return true;
  }
  return false;
}
}  // namespace

Fabric::Fabric(uint64_t seed, FabricConfig config, ClockMode mode)
    : clock_(mode), config_(config), rng_(crypto::ChaChaRng(seed).fork("fabric")) {}

void Fabric::register_site(const SiteId& site) { sites_.insert(site); }

void Fabric::add_node(const NodeId& id, const SiteId& site, NodeTraits traits) {
  if (!sites_.count(site)) throw UnknownElement("unknown site " + site);
  if (nodes_.count(id)) throw std::invalid_argument("duplicate node " + id);
  Node n;
  n.id = id;
  n.site = site;
  n.traits = traits;
  nodes_.emplace(id, std::move(n));
}

void Fabric::remove_node(const NodeId& id) { nodes_.erase(id); }

void Fabric::set_node_traits(const NodeId& id, NodeTraits traits) {
  node_ref(id).traits = traits;
}

const NodeTraits& Fabric::node_traits(const NodeId& id) const {
  return node_ref(id).traits;
}

const SiteId& Fabric::node_site(const NodeId& id) const {
  return node_ref(id).site;
}

Fabric::Node& Fabric::node_ref(const NodeId& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw UnknownElement("unknown node " + id);
  return it->second;
}

const Fabric::Node& Fabric::node_ref(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw UnknownElement("unknown node " + id);
  return it->second;
}

Fabric::Link& Fabric::link_ref(const LinkId& id) {
  auto it = links_.find(id);
  if (it == links_.end()) throw UnknownElement("unknown link " + id);
  return *it->second;
}

void Fabric::add_link(const LinkId& id, Endpoint a, Endpoint b, LinkParams params) {
  if (links_.count(id)) throw std::invalid_argument("duplicate link " + id);
  Node& na = node_ref(a.node);
  Node& nb = node_ref(b.node);
  auto link = std::make_unique<Link>(Link{
      id, a, b, params, {}, na.site != nb.site, {}, rng_.fork("link/" + id)});
  if (link->cross_site && !has_intersite(na.site, nb.site))
    throw NoRoute("no intersite path between " + na.site + " and " + nb.site);
  na.ifaces[a.iface] = id;
  nb.ifaces[b.iface] = id;
  links_.emplace(id, std::move(link));
}

void Fabric::remove_link(const LinkId& id) {
  auto it = links_.find(id);
  if (it == links_.end()) return;
  for (const Endpoint& ep : {it->second->a, it->second->b}) {
    auto node = nodes_.find(ep.node);
    if (node != nodes_.end()) node->second.ifaces.erase(ep.iface);
  }
  links_.erase(it);
}

void Fabric::set_class_weight(const LinkId& id, int qos_class, int weight) {
  if (weight < 1) throw std::invalid_argument("class weight must be >= 1");
  link_ref(id).class_weights[qos_class] = weight;
}

const LinkParams& Fabric::link_params(const LinkId& id) const {
  auto it = links_.find(id);
  if (it == links_.end()) throw UnknownElement("unknown link " + id);
  return it->second->params;
}

void Fabric::configure_intersite(const SiteId& a, const SiteId& b,
                                 LinkParams params, bool site_tunnel) {
  if (!sites_.count(a)) throw UnknownElement("unknown site " + a);
  if (!sites_.count(b)) throw UnknownElement("unknown site " + b);
  if (intersite_between(a, b))
    throw DuplicateIntersiteLink("intersite link " + a + "<->" + b +
                                 " already configured");
  Intersite is;
  is.site_a = a;
  is.site_b = b;
  is.site_tunnel = site_tunnel;
  is.link_id = "intersite:" + a + ":" + b;

  Link link{is.link_id,
            {"gw:" + a, "wan"},
            {"gw:" + b, "wan"},
            params,
            {},
            false,
            {},
            rng_.fork("link/" + is.link_id)};
  links_.emplace(is.link_id, std::make_unique<Link>(std::move(link)));

  if (site_tunnel) {
    auto hs_rng = rng_.fork("intersite-keys/" + a + "/" + b);
    tunnel::StaticKeypair gw_a = tunnel::generate_keypair(hs_rng);
    tunnel::StaticKeypair gw_b = tunnel::generate_keypair(hs_rng);
    Key32 psk{};
    auto init = tunnel::initiate(gw_a, gw_b.public_key, psk, clock_.now(),
                                 hs_rng, intersite_limits());
    tunnel::InitiatorTimestamps seen;
    auto resp = tunnel::respond(gw_b, psk, init.frame, seen, clock_.now(),
                                hs_rng, intersite_limits());
    is.session[0] = tunnel::finalize(init.state, resp.frame, clock_.now(),
                                     intersite_limits());
    is.session[1] = resp.session;
  }
  intersites_.push_back(std::move(is));
}

bool Fabric::has_intersite(const SiteId& a, const SiteId& b) const {
  for (const auto& is : intersites_) {
    if ((is.site_a == a && is.site_b == b) || (is.site_a == b && is.site_b == a))
      return true;
  }
  return false;
}

Fabric::Intersite* Fabric::intersite_between(const SiteId& a, const SiteId& b) {
  for (auto& is : intersites_) {
    if ((is.site_a == a && is.site_b == b) || (is.site_a == b && is.site_b == a))
      return &is;
  }
  return nullptr;
}

std::optional<tunnel::TransportSession> Fabric::intersite_rx_session(
    const SiteId& toward_site) const {
  for (const auto& is : intersites_) {
    const std::optional<tunnel::TransportSession>* found = nullptr;
    if (is.site_a == toward_site && is.session[0]) found = &is.session[0];
    if (is.site_b == toward_site && is.session[1]) found = &is.session[1];
    if (found) {
      // rebuild with a fresh replay window so inspection cannot collide
      // with counters the live gateway already consumed
      const tunnel::TransportSession& s = **found;
      return tunnel::TransportSession(s.role(), s.send_key(), s.recv_key(),
                                      s.local_index(), s.remote_index(),
                                      s.handshake_hash(), s.established_at(),
                                      intersite_limits());
    }
  }
  return std::nullopt;
}

void Fabric::set_handler(const NodeId& id, DeliveryHandler handler) {
  node_ref(id).handler = std::move(handler);
}

SimTime Fabric::bits_ns(uint64_t bits, double rate_mbps) {
  return SimTime(llround(double(bits) * 1000.0 / rate_mbps));
}

uint64_t Fabric::send(const NodeId& src, const std::string& iface,
                      const NodeId& dst, Bytes payload, SendOptions options) {
  Node& src_node = node_ref(src);
  auto iface_it = src_node.ifaces.find(iface);
  if (iface_it == src_node.ifaces.end())
    throw NoRoute("node " + src + " has no interface " + iface);
  Link& link = link_ref(iface_it->second);
  const Endpoint& far = link.a.node == src ? link.b : link.a;
  if (far.node != dst)
    throw NoRoute("interface " + iface + " does not reach " + dst);
  if (payload.size() > config_.mtu)
    throw FrameTooLarge("payload of " + std::to_string(payload.size()) +
                        " bytes exceeds MTU " + std::to_string(config_.mtu));

  uint64_t id = next_send_id_++;
  PendingSend p;
  p.id = id;
  p.src = src;
  p.dst = dst;
  p.link = link.id;
  p.serialize_on = link.id;
  p.dst_iface = far.iface;
  p.qos_class = options.qos_class;
  p.payload = std::move(payload);
  p.options = options;
  if (p.options.app_bits == 0) p.options.app_bits = p.payload.size() * 8;

  int src_gw = -1;
  if (link.cross_site) {
    Intersite* is = intersite_between(src_node.site, node_ref(dst).site);
    if (!is) throw NoRoute("no intersite path for link " + link.id);
    p.serialize_on = is->link_id;
    src_gw = src_node.site == is->site_a ? 0 : 1;
  }

  SimTime cost = bits_ns(p.options.app_bits, src_node.traits.proc_rate_mbps) +
                 bits_ns(p.options.src_crypto_bits, src_node.traits.crypto_rate_mbps) +
                 p.options.src_service;
  SimTime done = occupy_node(src_node, clock_.now(), cost) + options.src_fixed;
  pending_.emplace(id, std::move(p));
  if (src_gw >= 0) {
    schedule_at(done, [this, id, src_gw] { stage_gateway(id, src_gw, true, clock_.now()); });
  } else {
    schedule_at(done, [this, id] { enqueue_on_link(id, clock_.now()); });
  }
  return id;
}

void Fabric::stage_gateway(uint64_t send_id, int gw_index, bool sealing,
                           SimTime at) {
  auto it = pending_.find(send_id);
  if (it == pending_.end()) return;
  PendingSend& p = it->second;
  auto link_it = links_.find(p.serialize_on);
  if (link_it == links_.end()) {
    pending_.erase(it);
    return;
  }
  Intersite* is = nullptr;
  for (auto& cand : intersites_) {
    if (cand.link_id == p.serialize_on) is = &cand;
  }
  if (!is) {
    pending_.erase(it);
    return;
  }

  SimTime crypto_cost = 0;
  if (is->site_tunnel && is->session[gw_index]) {
    tunnel::TransportSession& session = *is->session[gw_index];
    if (sealing) {
      tunnel::TransportFrame f = session.seal(p.payload, at);
      p.payload = tunnel::encode(f);
    } else {
      try {
        tunnel::TransportFrame f = tunnel::decode_transport(p.payload);
        p.payload = session.open(f, at);
      } catch (const tunnel::TunnelError&) {
        pending_.erase(it);
        return;
      }
    }
    // charged over the sealed frame, whichever side of the transform we are on
    uint64_t sealed_bits =
        (sealing ? p.payload.size() : p.payload.size() + tunnel::kTransportOverhead) * 8;
    crypto_cost = bits_ns(sealed_bits, config_.gateway.crypto_rate_mbps);
  }
  SimTime fwd = bits_ns(p.options.app_bits, config_.gateway.proc_rate_mbps);
  SimTime start = std::max(at, is->gw_busy_until[gw_index]);
  is->gw_busy_until[gw_index] = start + fwd + crypto_cost;
  SimTime done = is->gw_busy_until[gw_index] + config_.gateway.crypto_fixed_latency;

  if (sealing) {
    schedule_at(done, [this, send_id] { enqueue_on_link(send_id, clock_.now()); });
  } else {
    schedule_at(done, [this, send_id] {
      auto pit = pending_.find(send_id);
      if (pit == pending_.end()) return;
      finish_at_destination(send_id, clock_.now());
    });
  }
}

void Fabric::enqueue_on_link(uint64_t send_id, SimTime at) {
  auto it = pending_.find(send_id);
  if (it == pending_.end()) return;
  auto link_it = links_.find(it->second.serialize_on);
  if (link_it == links_.end()) {
    pending_.erase(it);
    return;
  }
  Link& link = *link_it->second;
  int dir = link.a.node == it->second.src ? 0 : 1;
  if (link.id != it->second.link) {
    // riding the intersite carrier: direction by site of the source node
    auto src_it = nodes_.find(it->second.src);
    if (src_it == nodes_.end()) {
      pending_.erase(it);
      return;
    }
    dir = link.a.node == "gw:" + src_it->second.site ? 0 : 1;
  }
  link.dir[dir].queues[it->second.qos_class].push_back(send_id);
  try_dispatch(link.id, dir, at);
}

void Fabric::try_dispatch(const LinkId& link_id, int dir, SimTime at) {
  auto link_it = links_.find(link_id);
  if (link_it == links_.end()) return;
  Link& link = *link_it->second;
  LinkDir& d = link.dir[dir];
  if (d.busy) return;

  // weighted fair pick: smallest served-bytes/weight ratio, ties to the
  // lowest class id
  int best_class = -1;
  for (auto& [cls, queue] : d.queues) {
    if (queue.empty()) continue;
    if (best_class == -1) {
      best_class = cls;
      continue;
    }
    auto weight = [&](int c) {
      auto w = link.class_weights.find(c);
      return w == link.class_weights.end() ? 1 : w->second;
    };
    using u128 = unsigned __int128;
    u128 lhs = u128(d.deficit[cls]) * uint64_t(weight(best_class));
    u128 rhs = u128(d.deficit[best_class]) * uint64_t(weight(cls));
    if (lhs < rhs) best_class = cls;
  }
  if (best_class == -1) {
    d.deficit.clear();
    return;
  }

  uint64_t send_id = d.queues[best_class].front();
  d.queues[best_class].pop_front();
  auto it = pending_.find(send_id);
  if (it == pending_.end()) {
    try_dispatch(link_id, dir, at);
    return;
  }
  d.deficit[best_class] += int64_t(it->second.payload.size());
  d.busy = true;
  SimTime ser = bits_ns(it->second.payload.size() * 8, link.params.capacity_mbps);
  schedule_at(at + ser, [this, link_id, dir, send_id] {
    finish_serialization(link_id, dir, send_id, clock_.now());
  });
}

void Fabric::finish_serialization(const LinkId& link_id, int dir,
                                  uint64_t send_id, SimTime at) {
  auto link_it = links_.find(link_id);
  if (link_it == links_.end()) {
    pending_.erase(send_id);
    return;
  }
  Link& link = *link_it->second;
  link.dir[dir].busy = false;
  try_dispatch(link_id, dir, at);

  auto it = pending_.find(send_id);
  if (it == pending_.end()) return;
  PendingSend& p = it->second;

  for (auto& tap : taps_) {
    if (tap.link == link_id && tap.active)
      tap.records.push_back(TapRecord{at, p.src, p.dst, link_id, p.payload});
  }

  if (link.params.loss_prob > 0 &&
      link.rng.next_double() < link.params.loss_prob) {
    pending_.erase(it);
    return;
  }
  SimTime extra = 0;
  if (link.params.jitter_ms > 0)
    extra = SimTime(llround(link.rng.next_double() * link.params.jitter_ms *
                            double(kMillisecond)));
  SimTime arrival = at + ms_to_sim(link.params.delay_ms) + extra;
  schedule_at(arrival, [this, send_id] { arrive(send_id, clock_.now()); });
}

void Fabric::arrive(uint64_t send_id, SimTime at) {
  auto it = pending_.find(send_id);
  if (it == pending_.end()) return;
  PendingSend& p = it->second;
  if (p.serialize_on != p.link) {
    // came off the intersite carrier; pass through the receiving gateway
    auto dst_it = nodes_.find(p.dst);
    if (dst_it == nodes_.end()) {
      pending_.erase(it);
      return;
    }
    Intersite* is = nullptr;
    for (auto& cand : intersites_) {
      if (cand.link_id == p.serialize_on) is = &cand;
    }
    if (!is) {
      pending_.erase(it);
      return;
    }
    int gw = dst_it->second.site == is->site_a ? 0 : 1;
    stage_gateway(send_id, gw, false, at);
    return;
  }
  finish_at_destination(send_id, at);
}

void Fabric::finish_at_destination(uint64_t send_id, SimTime at) {
  auto it = pending_.find(send_id);
  if (it == pending_.end()) return;
  PendingSend& p = it->second;
  auto dst_it = nodes_.find(p.dst);
  if (dst_it == nodes_.end()) {
    pending_.erase(it);
    return;
  }
  Node& dst = dst_it->second;
  SimTime cost = bits_ns(p.options.app_bits, dst.traits.proc_rate_mbps) +
                 bits_ns(p.options.dst_crypto_bits, dst.traits.crypto_rate_mbps);
  SimTime done = occupy_node(dst, at, cost) + p.options.dst_fixed;
  schedule_at(done, [this, send_id] {
    auto pit = pending_.find(send_id);
    if (pit == pending_.end()) return;
    PendingSend frame = std::move(pit->second);
    pending_.erase(pit);
    auto node_it = nodes_.find(frame.dst);
    if (node_it == nodes_.end() || !node_it->second.handler) return;
    Delivery d{frame.src,      frame.dst,     frame.link,
               frame.dst_iface, frame.qos_class, std::move(frame.payload),
               clock_.now(),   frame.id};
    node_it->second.handler(d);
  });
}

TapHandle Fabric::attach_tap(const LinkId& link) {
  link_ref(link);
  taps_.push_back(Tap{link, true, {}});
  return TapHandle(taps_.size() - 1);
}

void Fabric::pause_tap(TapHandle tap) { taps_.at(tap).active = false; }
void Fabric::resume_tap(TapHandle tap) { taps_.at(tap).active = true; }

size_t Fabric::scan_tap(TapHandle tap, std::span<const uint8_t> needle) const {
  size_t count = 0;
  for (const auto& rec : taps_.at(tap).records) {
    if (contains(rec.payload, needle)) ++count;
  }
  return count;
}

const std::vector<TapRecord>& Fabric::tap_records(TapHandle tap) const {
  return taps_.at(tap).records;
}

void Fabric::export_tap(TapHandle tap, std::ostream& out) const {
  char ts[32];
  for (const auto& rec : taps_.at(tap).records) {
    snprintf(ts, sizeof(ts), "%.3f", double(rec.ts) / 1000.0);
    out << "{\"ts_us\":" << ts << ",\"src\":\"" << rec.src << "\",\"dst\":\""
        << rec.dst << "\",\"link\":\"" << rec.link << "\",\"hex_payload\":\""
        << to_hex(rec.payload) << "\"}\n";
  }
}

std::vector<TapHandle> Fabric::taps_on(const LinkId& link) const {
  std::vector<TapHandle> out;
  for (size_t i = 0; i < taps_.size(); ++i) {
    if (taps_[i].link == link) out.push_back(TapHandle(i));
  }
  return out;
}

std::vector<TapHandle> Fabric::all_taps() const {
  std::vector<TapHandle> out;
  for (size_t i = 0; i < taps_.size(); ++i) out.push_back(TapHandle(i));
  return out;
}

void Fabric::schedule_at(SimTime at, std::function<void()> fn) {
  events_.push(Event{std::max(at, clock_.now()), next_seq_++, std::move(fn)});
}

void Fabric::schedule_in(SimTime delay, std::function<void()> fn) {
  schedule_at(clock_.now() + delay, std::move(fn));
}

size_t Fabric::advance(SimTime duration) {
  SimTime target = clock_.now() + duration;
  size_t processed = 0;
  while (!events_.empty() && events_.top().t <= target) {
    Event ev = events_.top();
    events_.pop();
    clock_.advance_to(ev.t);
    ev.fn();
    ++processed;
  }
  clock_.advance_to(target);
  return processed;
}

size_t Fabric::run_until_idle() {
  size_t processed = 0;
  while (!events_.empty()) {
    Event ev = events_.top();
    events_.pop();
    clock_.advance_to(ev.t);
    ev.fn();
    ++processed;
  }
  return processed;
}

size_t Fabric::run_realtime() {
  size_t processed = 0;
  while (!events_.empty()) {
    Event ev = events_.top();
    events_.pop();
    SimTime now = clock_.now();
    if (ev.t > now)
      std::this_thread::sleep_for(std::chrono::nanoseconds(ev.t - now));
    ev.fn();
    ++processed;
  }
  return processed;
}

}  // namespace sliceguard::netem
