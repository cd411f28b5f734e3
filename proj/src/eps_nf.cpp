#include "sliceguard/eps/nf.hpp"

#include <nlohmann/json.hpp>

namespace sliceguard::eps {

using nlohmann::ordered_json;

void validate_subscriber(const SubscriberRecord& s) {
  if (s.imsi.size() != 15 ||
      s.imsi.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("imsi must be 15 digits: " + s.imsi);
  if (s.key.size() != 16) throw std::invalid_argument("subscriber key must be 16 bytes");
  if (s.realm.empty()) throw std::invalid_argument("realm must be non-empty");
}

std::vector<SubscriberRecord> parse_subscribers(const std::string& jsonl) {
  std::vector<SubscriberRecord> out;
  size_t pos = 0;
  int line_no = 0;
  while (pos < jsonl.size()) {
    size_t end = jsonl.find('\n', pos);
    if (end == std::string::npos) end = jsonl.size();
    std::string line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("subscribers line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
    SubscriberRecord rec;
    rec.imsi = j.at("imsi").get<std::string>();
    rec.key = from_hex(j.at("key_hex").get<std::string>());
    rec.apn = j.at("apn").get<std::string>();
    rec.realm = j.at("realm").get<std::string>();
    validate_subscriber(rec);
    out.push_back(std::move(rec));
  }
  return out;
}

std::string serialize_subscribers(const std::vector<SubscriberRecord>& subs) {
  std::string out;
  for (const auto& s : subs) {
    ordered_json j;
    j["imsi"] = s.imsi;
    j["key_hex"] = to_hex(s.key);
    j["apn"] = s.apn;
    j["realm"] = s.realm;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string to_string(AttachState s) {
  switch (s) {
    case AttachState::idle: return "idle";
    case AttachState::authenticating: return "authenticating";
    case AttachState::locating: return "locating";
    case AttachState::session_setup: return "session_setup";
    case AttachState::attached: return "attached";
    case AttachState::rejected: return "rejected";
  }
  return "?";
}

// ---- HSS ----

void HssApp::provision(const SubscriberRecord& sub) {
  validate_subscriber(sub);
  subscribers_[sub.imsi] = sub;
}

const SubscriberRecord* HssApp::find(const std::string& imsi) const {
  auto it = subscribers_.find(imsi);
  return it == subscribers_.end() ? nullptr : &it->second;
}

void HssApp::on_message(UnitServices& unit, const std::string& iface,
                        const EpsMessage& msg) {
  switch (msg.kind) {
    case MsgKind::AuthInfoRequest: {
      const std::string& imsi = msg.get("imsi");
      EpsMessage reply = EpsMessage::make(
          MsgKind::AuthInfoAnswer,
          {{"imsi", imsi},
           {"realm", settings_.realm},
           {"origin_host", hostname()},
           {"dest_host", msg.get("origin_host")}});
      const SubscriberRecord* sub = find(imsi);
      if (sub) {
        reply.set("result", "ok");
        // derived "vector" stands in for the EPS authentication vectors
        reply.set("auth_vector", to_hex(sub->key));
      } else {
        reply.set("result", "unknown-subscriber");
      }
      unit.send_message(iface, reply, settings_.hss_service);
      break;
    }
    case MsgKind::UpdateLocationRequest: {
      const std::string& imsi = msg.get("imsi");
      EpsMessage reply = EpsMessage::make(
          MsgKind::UpdateLocationAnswer,
          {{"imsi", imsi},
           {"realm", settings_.realm},
           {"origin_host", hostname()},
           {"dest_host", msg.get("origin_host")},
           {"result", find(imsi) ? "ok" : "unknown-subscriber"}});
      if (const SubscriberRecord* sub = find(imsi)) reply.set("apn", sub->apn);
      unit.send_message(iface, reply, settings_.hss_service);
      break;
    }
    default:
      break;  // HSS ignores anything else
  }
}

// ---- MME ----

AttachContext& MmeApp::ctx(const std::string& imsi) {
  auto [it, inserted] = contexts_.try_emplace(imsi);
  if (inserted) it->second.imsi = imsi;
  return it->second;
}

void MmeApp::enter(AttachContext& c, AttachState s, SimTime now) {
  c.state = s;
  c.step_times[to_string(s)] = now;
}

const AttachContext* MmeApp::context(const std::string& imsi) const {
  auto it = contexts_.find(imsi);
  return it == contexts_.end() ? nullptr : &it->second;
}

void MmeApp::on_message(UnitServices& unit, const std::string& iface,
                        const EpsMessage& msg) {
  (void)iface;
  switch (msg.kind) {
    case MsgKind::AttachRequest: {
      const std::string& imsi = msg.get("imsi");
      AttachContext& c = ctx(imsi);
      c = AttachContext{};
      c.imsi = imsi;
      enter(c, AttachState::authenticating, unit.now());
      EpsMessage air = EpsMessage::make(
          MsgKind::AuthInfoRequest, {{"imsi", imsi},
                                     {"realm", settings_.realm},
                                     {"origin_host", hostname()},
                                     {"dest_host", "hss." + settings_.realm}});
      air_sent_[imsi] = unit.now();
      unit.send_message("s6a", air);
      break;
    }
    case MsgKind::AuthInfoAnswer: {
      const std::string& imsi = msg.get("imsi");
      AttachContext& c = ctx(imsi);
      if (msg.get("result") == "ok") {
        auto sent = air_sent_.find(imsi);
        if (sent != air_sent_.end()) {
          srt_samples_.push_back(
              SrtSample{imsi, "AuthInfoRequest", sent->second, unit.now()});
          air_sent_.erase(sent);
        }
        enter(c, AttachState::locating, unit.now());
        unit.send_message(
            "s6a", EpsMessage::make(MsgKind::UpdateLocationRequest,
                                    {{"imsi", imsi},
                                     {"realm", settings_.realm},
                                     {"origin_host", hostname()},
                                     {"dest_host", "hss." + settings_.realm}}));
      } else {
        ++rejected_;
        air_sent_.erase(imsi);
        enter(c, AttachState::rejected, unit.now());
        unit.send_message(
            "s1c", EpsMessage::make(MsgKind::AttachReject,
                                    {{"imsi", imsi}, {"cause", msg.get("result")}}));
      }
      break;
    }
    case MsgKind::UpdateLocationAnswer: {
      const std::string& imsi = msg.get("imsi");
      AttachContext& c = ctx(imsi);
      if (msg.get("result") != "ok") {
        enter(c, AttachState::rejected, unit.now());
        unit.send_message(
            "s1c", EpsMessage::make(MsgKind::AttachReject,
                                    {{"imsi", imsi}, {"cause", msg.get("result")}}));
        break;
      }
      enter(c, AttachState::session_setup, unit.now());
      unit.send_message(
          "s11", EpsMessage::make(MsgKind::CreateSessionRequest,
                                  {{"imsi", imsi},
                                   {"apn", msg.find("apn") ? msg.get("apn")
                                                           : settings_.apn}}));
      break;
    }
    case MsgKind::CreateSessionResponse: {
      const std::string& imsi = msg.get("imsi");
      AttachContext& c = ctx(imsi);
      c.ue_ip = msg.get("ue_ip");
      c.teid_ul = msg.get_u64("teid_ul");
      c.teid_dl = msg.get_u64("teid_dl");
      enter(c, AttachState::attached, unit.now());
      unit.send_message(
          "s1c", EpsMessage::make(MsgKind::InitialContextSetup,
                                  {{"imsi", imsi},
                                   {"ue_ip", c.ue_ip},
                                   {"teid_ul", std::to_string(c.teid_ul)},
                                   {"teid_dl", std::to_string(c.teid_dl)}}));
      break;
    }
    default:
      break;
  }
}

// ---- SPGW-C ----

void SpgwcApp::on_message(UnitServices& unit, const std::string& iface,
                          const EpsMessage& msg) {
  switch (msg.kind) {
    case MsgKind::CreateSessionRequest: {
      if (iface == "s11") {
        // allocate the session and program the user plane over Sx
        const std::string& imsi = msg.get("imsi");
        std::string ue_ip = "12.1.1." + std::to_string(next_host_++);
        uint64_t teid_ul = next_teid_++;
        uint64_t teid_dl = next_teid_++;
        pending_[imsi] = msg;
        unit.send_message(
            "sx", EpsMessage::make(MsgKind::CreateSessionRequest,
                                   {{"imsi", imsi},
                                    {"ue_ip", ue_ip},
                                    {"teid_ul", std::to_string(teid_ul)},
                                    {"teid_dl", std::to_string(teid_dl)},
                                    {"op", "install"}}));
      }
      break;
    }
    case MsgKind::CreateSessionResponse: {
      if (iface == "sx") {
        const std::string& imsi = msg.get("imsi");
        auto it = pending_.find(imsi);
        if (it == pending_.end()) break;
        pending_.erase(it);
        EpsMessage reply = msg;
        reply.set("result", "ok");
        unit.send_message("s11", reply);
      }
      break;
    }
    default:
      break;
  }
}

// ---- SPGW-U ----

void SpgwuApp::install(GtpSession session) {
  sessions_[session.teid_ul] = std::move(session);
}

const SpgwuApp::GtpSession* SpgwuApp::session_by_ul(uint64_t teid) const {
  auto it = sessions_.find(teid);
  return it == sessions_.end() ? nullptr : &it->second;
}

EpsMessage SpgwuApp::forward(const EpsMessage& gtp_data) const {
  uint64_t teid = gtp_data.get_u64("teid");
  const GtpSession* session = session_by_ul(teid);
  if (!session) throw UnknownTeid(teid);
  // PDN echo sink: uplink payload comes straight back on the downlink teid
  EpsMessage down = EpsMessage::make(MsgKind::GtpData,
                                     {{"teid", std::to_string(session->teid_dl)},
                                      {"dir", "dl"},
                                      {"payload", gtp_data.get("payload")}});
  if (const std::string* echo = gtp_data.find("echo_id")) down.set("echo_id", *echo);
  return down;
}

void SpgwuApp::on_message(UnitServices& unit, const std::string& iface,
                          const EpsMessage& msg) {
  switch (msg.kind) {
    case MsgKind::CreateSessionRequest: {
      if (iface == "sx" && msg.find("op") && msg.get("op") == "install") {
        install(GtpSession{msg.get("imsi"), msg.get("ue_ip"),
                           msg.get_u64("teid_ul"), msg.get_u64("teid_dl")});
        EpsMessage reply = EpsMessage::make(
            MsgKind::CreateSessionResponse,
            {{"imsi", msg.get("imsi")},
             {"ue_ip", msg.get("ue_ip")},
             {"teid_ul", msg.get("teid_ul")},
             {"teid_dl", msg.get("teid_dl")}});
        unit.send_message("sx", reply);
      }
      break;
    }
    case MsgKind::GtpData: {
      if (iface == "s1u" && msg.get("dir") == "ul") {
        try {
          unit.send_message("s1u", forward(msg));
        } catch (const UnknownTeid&) {
          ++unknown_teid_;
        }
      }
      break;
    }
    default:
      break;
  }
}

// ---- eNB ----

void EnbApp::on_message(UnitServices& unit, const std::string& iface,
                        const EpsMessage& msg) {
  switch (msg.kind) {
    case MsgKind::AttachRequest: {
      if (iface == "uu") {
        ue_imsi_ = msg.get("imsi");
        EpsMessage fwd = msg;
        fwd.set("enb", "enb01");
        unit.send_message("s1c", fwd);
      }
      break;
    }
    case MsgKind::InitialContextSetup: {
      teid_ul_ = msg.get_u64("teid_ul");
      teid_dl_ = msg.get_u64("teid_dl");
      unit.send_message(
          "uu", EpsMessage::make(MsgKind::AttachAccept,
                                 {{"imsi", msg.get("imsi")},
                                  {"ue_ip", msg.get("ue_ip")}}));
      break;
    }
    case MsgKind::AttachReject: {
      unit.send_message("uu", msg);
      break;
    }
    case MsgKind::GtpData: {
      if (iface == "uu") {
        // uplink: encapsulate with the session's uplink teid
        EpsMessage up = msg;
        up.set("teid", std::to_string(teid_ul_));
        up.set("dir", "ul");
        unit.send_message("s1u", up);
      } else if (iface == "s1u") {
        // downlink toward the UE
        unit.send_message("uu", msg);
      }
      break;
    }
    default:
      break;
  }
}

// ---- UE ----

void UeApp::start_attach(UnitServices& unit, const std::string& imsi) {
  imsi_ = imsi;
  state_ = AttachState::authenticating;
  unit.send_message("uu", EpsMessage::make(MsgKind::AttachRequest,
                                           {{"imsi", imsi}, {"apn", "oai.ipv4"}}));
}

void UeApp::send_user_payload(UnitServices& unit, const EpsMessage& inner) {
  if (state_ != AttachState::attached) throw NotAttached();
  unit.send_message("uu", inner);
}

void UeApp::on_message(UnitServices& unit, const std::string& iface,
                       const EpsMessage& msg) {
  (void)iface;
  switch (msg.kind) {
    case MsgKind::AttachAccept:
      state_ = AttachState::attached;
      ue_ip_ = msg.get("ue_ip");
      break;
    case MsgKind::AttachReject:
      state_ = AttachState::rejected;
      break;
    case MsgKind::GtpData:
      if (hook_) hook_(msg, unit.now());
      break;
    default:
      break;
  }
}

}  // namespace sliceguard::eps
