#include "sliceguard/eps/messages.hpp"

namespace sliceguard::eps {

namespace {
const std::pair<MsgKind, const char*> kKindNames[] = {
    {MsgKind::AttachRequest, "AttachRequest"},
    {MsgKind::AuthInfoRequest, "AuthInfoRequest"},
    {MsgKind::AuthInfoAnswer, "AuthInfoAnswer"},
    {MsgKind::UpdateLocationRequest, "UpdateLocationRequest"},
    {MsgKind::UpdateLocationAnswer, "UpdateLocationAnswer"},
    {MsgKind::CreateSessionRequest, "CreateSessionRequest"},
    {MsgKind::CreateSessionResponse, "CreateSessionResponse"},
    {MsgKind::InitialContextSetup, "InitialContextSetup"},
    {MsgKind::AttachAccept, "AttachAccept"},
    {MsgKind::AttachReject, "AttachReject"},
    {MsgKind::GtpData, "GtpData"},
    {MsgKind::EchoRequest, "EchoRequest"},
    {MsgKind::EchoReply, "EchoReply"},
};
}  // namespace

std::string to_string(MsgKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<MsgKind> msg_kind_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKindNames)
    if (s == name) return kind;
  return std::nullopt;
}

const std::string& EpsMessage::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) throw CodecError("missing field '" + key + "' in " + to_string(kind));
  return *v;
}

void EpsMessage::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : fields) {
    if (k == key) {
      v = value;
      return;
    }
  }
  fields.emplace_back(key, value);
}

uint64_t EpsMessage::get_u64(const std::string& key) const {
  return std::stoull(get(key));
}

Bytes encode(const EpsMessage& m) {
  std::string out = "EPS1 ";
  auto put = [&out](const std::string& record) {
    out += std::to_string(record.size());
    out += ':';
    out += record;
    out += ',';
  };
  put("kind=" + to_string(m.kind));
  for (const auto& [k, v] : m.fields) put(k + "=" + v);
  return Bytes(out.begin(), out.end());
}

EpsMessage decode(std::span<const uint8_t> wire) {
  std::string_view s(reinterpret_cast<const char*>(wire.data()), wire.size());
  if (s.substr(0, 5) != "EPS1 ") throw CodecError("bad magic");
  size_t pos = 5;
  EpsMessage m;
  bool have_kind = false;
  while (pos < s.size()) {
    size_t colon = s.find(':', pos);
    if (colon == std::string_view::npos) throw CodecError("missing length prefix");
    size_t len = 0;
    for (size_t i = pos; i < colon; ++i) {
      char c = s[i];
      if (c < '0' || c > '9') throw CodecError("bad length digit");
      len = len * 10 + size_t(c - '0');
    }
    size_t start = colon + 1;
    if (start + len + 1 > s.size()) throw CodecError("record overruns message");
    if (s[start + len] != ',') throw CodecError("missing record terminator");
    std::string_view record = s.substr(start, len);
    size_t eq = record.find('=');
    if (eq == std::string_view::npos) throw CodecError("record missing '='");
    std::string key(record.substr(0, eq));
    std::string value(record.substr(eq + 1));
    if (key == "kind") {
      auto kind = msg_kind_from_string(value);
      if (!kind) throw CodecError("unknown message kind '" + value + "'");
      m.kind = *kind;
      have_kind = true;
    } else {
      m.fields.emplace_back(std::move(key), std::move(value));
    }
    pos = start + len + 1;
  }
  if (!have_kind) throw CodecError("message without kind");
  return m;
}

}  // namespace sliceguard::eps
