#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sliceguard/bytes.hpp"

namespace sliceguard::eps {

enum class MsgKind {
  AttachRequest,
  AuthInfoRequest,
  AuthInfoAnswer,
  UpdateLocationRequest,
  UpdateLocationAnswer,
  CreateSessionRequest,
  CreateSessionResponse,
  InitialContextSetup,
  AttachAccept,
  AttachReject,
  GtpData,
  EchoRequest,
  EchoReply,
};

std::string to_string(MsgKind k);
std::optional<MsgKind> msg_kind_from_string(const std::string& s);

// Flat control/user-plane message: a kind plus ordered string fields.
// The wire form is length-prefixed ASCII (netstring-style `len:key=value,`
// records), so identifiers like the IMSI appear verbatim in the bytes.
struct EpsMessage {
  MsgKind kind = MsgKind::EchoRequest;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return &v;
    return nullptr;
  }
  const std::string& get(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  uint64_t get_u64(const std::string& key) const;

  static EpsMessage make(MsgKind kind,
                         std::vector<std::pair<std::string, std::string>> fields) {
    return EpsMessage{kind, std::move(fields)};
  }
};

struct CodecError : std::runtime_error {
  explicit CodecError(const std::string& what) : std::runtime_error(what) {}
};

Bytes encode(const EpsMessage& m);
EpsMessage decode(std::span<const uint8_t> wire);

}  // namespace sliceguard::eps
