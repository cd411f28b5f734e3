#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>

#include "sliceguard/crypto/random.hpp"
#include "sliceguard/netem/clock.hpp"
#include "sliceguard/tunnel/session.hpp"

namespace sliceguard::netem {

using NodeId = std::string;
using LinkId = std::string;
using SiteId = std::string;

struct NoRoute : std::runtime_error {
  explicit NoRoute(const std::string& what) : std::runtime_error(what) {}
};
struct FrameTooLarge : std::runtime_error {
  explicit FrameTooLarge(const std::string& what) : std::runtime_error(what) {}
};
struct DuplicateIntersiteLink : std::runtime_error {
  explicit DuplicateIntersiteLink(const std::string& what)
      : std::runtime_error(what) {}
};
struct UnknownElement : std::runtime_error {
  explicit UnknownElement(const std::string& what) : std::runtime_error(what) {}
};

struct NodeTraits {
  int vcpus = 1;
  double proc_rate_mbps = 500.0;    // forwarding budget over app bytes
  double crypto_rate_mbps = 2000.0; // seal/open budget over frame bytes
  SimTime crypto_fixed_latency = 0; // per seal/open op, pipelined
};

struct LinkParams {
  double capacity_mbps = 20000.0;
  double delay_ms = 0.15;  // one-way propagation
  double jitter_ms = 0.0;
  double loss_prob = 0.0;
};

struct SendOptions {
  int qos_class = 0;
  uint64_t app_bits = 0;         // forwarding charge; 0 means payload bits
  uint64_t src_crypto_bits = 0;  // seal occupancy at the source node
  uint64_t dst_crypto_bits = 0;  // open occupancy at the destination node
  SimTime src_service = 0;       // application service time occupying the source
  SimTime src_fixed = 0;
  SimTime dst_fixed = 0;
};

struct Delivery {
  NodeId src;
  NodeId dst;
  LinkId link;
  std::string dst_iface;
  int qos_class = 0;
  Bytes payload;
  SimTime time = 0;
  uint64_t send_id = 0;
};

using DeliveryHandler = std::function<void(const Delivery&)>;

struct TapRecord {
  SimTime ts = 0;
  NodeId src;
  NodeId dst;
  LinkId link;
  Bytes payload;
};

using TapHandle = int;

struct Endpoint {
  NodeId node;
  std::string iface;
};

struct FabricConfig {
  size_t mtu = 1500;
  NodeTraits gateway;  // intersite gateway servers

  FabricConfig() {
    gateway.vcpus = 16;
    gateway.proc_rate_mbps = 100000.0;
    gateway.crypto_rate_mbps = 32000.0;
  }
};

// Deterministic discrete-event network fabric: sites, nodes, shaped
// links, an optional encrypted intersite carrier, taps, virtual time.
class Fabric {
 public:
  explicit Fabric(uint64_t seed, FabricConfig config = {},
                  ClockMode mode = ClockMode::virtual_time);

  Clock& clock() { return clock_; }
  const FabricConfig& config() const { return config_; }

  void register_site(const SiteId& site);
  bool has_site(const SiteId& site) const { return sites_.count(site) > 0; }

  void add_node(const NodeId& id, const SiteId& site, NodeTraits traits);
  void remove_node(const NodeId& id);
  void set_node_traits(const NodeId& id, NodeTraits traits);
  const NodeTraits& node_traits(const NodeId& id) const;
  const SiteId& node_site(const NodeId& id) const;

  void add_link(const LinkId& id, Endpoint a, Endpoint b, LinkParams params);
  void remove_link(const LinkId& id);
  void set_class_weight(const LinkId& id, int qos_class, int weight);
  const LinkParams& link_params(const LinkId& id) const;

  // Cross-site traffic between these sites rides this link; with
  // site_tunnel the carrier seals every frame in a site-level session.
  void configure_intersite(const SiteId& a, const SiteId& b, LinkParams params,
                           bool site_tunnel);
  bool has_intersite(const SiteId& a, const SiteId& b) const;
  // Clone of the receive-side gateway session for inspection/tests.
  std::optional<tunnel::TransportSession> intersite_rx_session(
      const SiteId& toward_site) const;

  void set_handler(const NodeId& id, DeliveryHandler handler);

  uint64_t send(const NodeId& src, const std::string& iface, const NodeId& dst,
                Bytes payload, SendOptions options = {});

  TapHandle attach_tap(const LinkId& link);
  void pause_tap(TapHandle tap);
  void resume_tap(TapHandle tap);
  size_t scan_tap(TapHandle tap, std::span<const uint8_t> needle) const;
  const std::vector<TapRecord>& tap_records(TapHandle tap) const;
  void export_tap(TapHandle tap, std::ostream& out) const;
  std::vector<TapHandle> taps_on(const LinkId& link) const;
  std::vector<TapHandle> all_taps() const;

  void schedule_at(SimTime at, std::function<void()> fn);
  void schedule_in(SimTime delay, std::function<void()> fn);

  // Virtual mode: process pending events. Both return events processed.
  size_t advance(SimTime duration);
  size_t run_until_idle();
  bool idle() const { return events_.empty(); }

  // Realtime mode: pump due events until the queue drains, sleeping
  // between them.
  size_t run_realtime();

 private:
  struct LinkDir {
    bool busy = false;
    std::map<int, std::deque<uint64_t>> queues;  // qos class -> pending sends
    std::map<int, int64_t> deficit;
  };

  struct Link {
    LinkId id;
    Endpoint a, b;
    LinkParams params;
    std::map<int, int> class_weights;
    bool cross_site = false;
    LinkDir dir[2];
    crypto::ChaChaRng rng;
  };

  struct Node {
    NodeId id;
    SiteId site;
    NodeTraits traits;
    SimTime busy_until = 0;
    DeliveryHandler handler;
    std::map<std::string, LinkId> ifaces;
  };

  struct Intersite {
    SiteId site_a, site_b;
    LinkId link_id;
    bool site_tunnel = false;
    // index 0: gateway at site_a, 1: gateway at site_b
    SimTime gw_busy_until[2] = {0, 0};
    std::optional<tunnel::TransportSession> session[2];
  };

  struct PendingSend {
    uint64_t id;
    NodeId src, dst;
    LinkId link;          // the virtual link named in send()
    LinkId serialize_on;  // same, or the intersite carrier
    std::string dst_iface;
    int qos_class = 0;
    Bytes payload;  // possibly site-sealed
    SendOptions options;
  };

  struct Event {
    SimTime t;
    uint64_t seq;
    std::function<void()> fn;
    bool operator>(const Event& other) const {
      return t != other.t ? t > other.t : seq > other.seq;
    }
  };

  Node& node_ref(const NodeId& id);
  const Node& node_ref(const NodeId& id) const;
  Link& link_ref(const LinkId& id);
  Intersite* intersite_between(const SiteId& a, const SiteId& b);
  static SimTime bits_ns(uint64_t bits, double rate_mbps);

  void enqueue_on_link(uint64_t send_id, SimTime at);
  void try_dispatch(const LinkId& link_id, int dir, SimTime at);
  void finish_serialization(const LinkId& link_id, int dir, uint64_t send_id,
                            SimTime at);
  void arrive(uint64_t send_id, SimTime at);
  void stage_gateway(uint64_t send_id, int gw_index, bool sealing, SimTime at);
  void finish_at_destination(uint64_t send_id, SimTime at);
  SimTime occupy_node(Node& node, SimTime at, SimTime cost) {
    SimTime start = std::max(at, node.busy_until);
    node.busy_until = start + cost;
    return node.busy_until;
  }

  Clock clock_;
  FabricConfig config_;
  crypto::ChaChaRng rng_;
  std::set<SiteId> sites_;
  std::map<NodeId, Node> nodes_;
  std::map<LinkId, std::unique_ptr<Link>> links_;
  std::vector<Intersite> intersites_;
  std::map<uint64_t, PendingSend> pending_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  uint64_t next_seq_ = 0;
  uint64_t next_send_id_ = 1;
  struct Tap {
    LinkId link;
    bool active = true;
    std::vector<TapRecord> records;
  };
  std::vector<Tap> taps_;
};

}  // namespace sliceguard::netem
