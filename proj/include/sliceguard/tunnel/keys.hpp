#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sliceguard/bytes.hpp"
#include "sliceguard/crypto/random.hpp"

namespace sliceguard::tunnel {

struct StaticKeypair {
  Key32 private_key{};  // clamped Curve25519 scalar
  Key32 public_key{};
};

// Fresh keypair from 32 rng bytes; the private scalar is clamped.
StaticKeypair generate_keypair(crypto::RandomSource& rng);

// Public key for a raw 32-byte private scalar (clamped before use).
Key32 derive_public(const Key32& private_key);

// 44-character standard base64 with trailing '='. Throws MalformedKey on
// anything that is not exactly the canonical encoding of 32 bytes.
std::string encode_key(const Key32& key);
Key32 decode_key(const std::string& text);

struct PeerDescriptor {
  Key32 remote_public{};
  std::string endpoint_host;
  uint16_t endpoint_port = 0;
  std::string tunnel_address;             // inner CIDR address, e.g. 10.200.1.2/24
  std::vector<std::string> allowed_cidrs;
  Key32 preshared_key{};                  // all-zero means none

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

}  // namespace sliceguard::tunnel
