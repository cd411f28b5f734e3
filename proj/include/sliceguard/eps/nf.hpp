#pragma once

#include <functional>
#include <map>
#include <optional>

#include "sliceguard/eps/messages.hpp"
#include "sliceguard/tunnel/session.hpp"

namespace sliceguard::eps {

using tunnel::SimTime;
using tunnel::kMillisecond;
using tunnel::kSecond;

struct UnknownSubscriber : std::runtime_error {
  explicit UnknownSubscriber(const std::string& imsi)
      : std::runtime_error("unknown subscriber " + imsi) {}
};
struct UnknownTeid : std::runtime_error {
  explicit UnknownTeid(uint64_t teid)
      : std::runtime_error("unknown teid " + std::to_string(teid)) {}
};
struct NotAttached : std::runtime_error {
  NotAttached() : std::runtime_error("UE is not attached") {}
};

struct SubscriberRecord {
  std::string imsi;  // 15 digits
  Bytes key;         // 16 bytes
  std::string apn;
  std::string realm;
};

// Throws std::invalid_argument on malformed records.
void validate_subscriber(const SubscriberRecord& s);
// JSON-lines {imsi, key_hex, apn, realm}.
std::vector<SubscriberRecord> parse_subscribers(const std::string& jsonl);
std::string serialize_subscribers(const std::vector<SubscriberRecord>& subs);

enum class AttachState {
  idle,
  authenticating,
  locating,
  session_setup,
  attached,
  rejected,
};
std::string to_string(AttachState s);

struct AttachContext {
  std::string imsi;
  AttachState state = AttachState::idle;
  std::string ue_ip;
  uint64_t teid_ul = 0;
  uint64_t teid_dl = 0;
  std::map<std::string, SimTime> step_times;  // state entered -> time
};

struct SrtSample {
  std::string imsi;
  std::string request_kind;
  SimTime t_request_sent = 0;
  SimTime t_answer_received = 0;
  double srt_ms() const {
    return double(t_answer_received - t_request_sent) / double(kMillisecond);
  }
};

// Capabilities the unit runtime hands to an NF behavior.
struct UnitServices {
  virtual ~UnitServices() = default;
  // service_occupancy models node-local application processing time that
  // is charged before the reply leaves the node.
  virtual void send_message(const std::string& iface, const EpsMessage& msg,
                            SimTime service_occupancy = 0) = 0;
  virtual SimTime now() const = 0;
  virtual const std::string& role_name() const = 0;
};

class NfApp {
 public:
  virtual ~NfApp() = default;
  virtual void start(UnitServices&) {}
  virtual void on_message(UnitServices& unit, const std::string& iface,
                          const EpsMessage& msg) = 0;
};

struct NfSettings {
  SimTime hss_service = SimTime(5.4 * double(kMillisecond));
  std::string realm = "epc.mnc001.mcc001.3gppnetwork.org";
  std::string apn = "oai.ipv4";
};

class HssApp final : public NfApp {
 public:
  explicit HssApp(NfSettings settings) : settings_(std::move(settings)) {}
  void provision(const SubscriberRecord& sub);
  const SubscriberRecord* find(const std::string& imsi) const;
  void on_message(UnitServices& unit, const std::string& iface,
                  const EpsMessage& msg) override;
  std::string hostname() const { return "hss." + settings_.realm; }

 private:
  NfSettings settings_;
  std::map<std::string, SubscriberRecord> subscribers_;
};

class MmeApp final : public NfApp {
 public:
  explicit MmeApp(NfSettings settings) : settings_(std::move(settings)) {}
  void on_message(UnitServices& unit, const std::string& iface,
                  const EpsMessage& msg) override;
  const AttachContext* context(const std::string& imsi) const;
  const std::vector<SrtSample>& srt_samples() const { return srt_samples_; }
  int rejected_count() const { return rejected_; }
  void clear_stats() {
    srt_samples_.clear();
    rejected_ = 0;
  }
  std::string hostname() const { return "mme." + settings_.realm; }

 private:
  AttachContext& ctx(const std::string& imsi);
  void enter(AttachContext& c, AttachState s, SimTime now);

  NfSettings settings_;
  std::map<std::string, AttachContext> contexts_;
  std::map<std::string, SimTime> air_sent_;
  std::vector<SrtSample> srt_samples_;
  int rejected_ = 0;
};

class SpgwcApp final : public NfApp {
 public:
  explicit SpgwcApp(NfSettings settings) : settings_(std::move(settings)) {}
  void on_message(UnitServices& unit, const std::string& iface,
                  const EpsMessage& msg) override;
  void release_all() { pending_.clear(); }

 private:
  NfSettings settings_;
  int next_host_ = 2;  // 12.1.1.2 first
  uint64_t next_teid_ = 1000;
  std::map<std::string, EpsMessage> pending_;  // imsi -> original S11 request
};

class SpgwuApp final : public NfApp {
 public:
  struct GtpSession {
    std::string imsi;
    std::string ue_ip;
    uint64_t teid_ul = 0;
    uint64_t teid_dl = 0;
  };

  void on_message(UnitServices& unit, const std::string& iface,
                  const EpsMessage& msg) override;
  // Direct-call forwarding used by tests and the downlink streamer;
  // throws UnknownTeid.
  EpsMessage forward(const EpsMessage& gtp_data) const;
  void install(GtpSession session);
  void release_all() { sessions_.clear(); }
  const GtpSession* session_by_ul(uint64_t teid) const;
  int unknown_teid_count() const { return unknown_teid_; }

 private:
  std::map<uint64_t, GtpSession> sessions_;  // keyed by uplink teid
  int unknown_teid_ = 0;
};

class EnbApp final : public NfApp {
 public:
  void on_message(UnitServices& unit, const std::string& iface,
                  const EpsMessage& msg) override;

 private:
  std::string ue_imsi_;
  uint64_t teid_ul_ = 0;
  uint64_t teid_dl_ = 0;
};

class UeApp final : public NfApp {
 public:
  using DeliveryHook = std::function<void(const EpsMessage&, SimTime)>;

  void start_attach(UnitServices& unit, const std::string& imsi);
  void on_message(UnitServices& unit, const std::string& iface,
                  const EpsMessage& msg) override;
  void send_user_payload(UnitServices& unit, const EpsMessage& inner);
  bool attached() const { return state_ == AttachState::attached; }
  AttachState state() const { return state_; }
  const std::string& ue_ip() const { return ue_ip_; }
  void set_delivery_hook(DeliveryHook hook) { hook_ = std::move(hook); }
  void reset() {
    state_ = AttachState::idle;
    ue_ip_.clear();
  }

 private:
  AttachState state_ = AttachState::idle;
  std::string imsi_;
  std::string ue_ip_;
  DeliveryHook hook_;
};

}  // namespace sliceguard::eps
