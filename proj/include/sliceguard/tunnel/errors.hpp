#pragma once

#include <stdexcept>
#include <string>

namespace sliceguard::tunnel {

struct TunnelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AuthenticationError : TunnelError {
  AuthenticationError() : TunnelError("AEAD authentication failed") {}
  explicit AuthenticationError(const std::string& what) : TunnelError(what) {}
};

struct StaleTimestamp : TunnelError {
  StaleTimestamp() : TunnelError("initiation timestamp not newer than last seen") {}
};

struct MalformedFrame : TunnelError {
  explicit MalformedFrame(const std::string& what) : TunnelError(what) {}
};

struct IndexMismatch : TunnelError {
  IndexMismatch() : TunnelError("frame receiver index does not match session") {}
};

struct ReplayError : TunnelError {
  explicit ReplayError(const std::string& what) : TunnelError(what) {}
};

struct SessionExpired : TunnelError {
  explicit SessionExpired(const std::string& what) : TunnelError(what) {}
};

struct MalformedKey : TunnelError {
  explicit MalformedKey(const std::string& what) : TunnelError(what) {}
};

}  // namespace sliceguard::tunnel
