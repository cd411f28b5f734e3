#pragma once

#include <span>

#include "sliceguard/bytes.hpp"

namespace sliceguard::crypto {

// Incremental SHA-256 (FIPS 180-4).
class Sha256 {
 public:
  Sha256();
  void update(std::span<const uint8_t> data);
  Key32 finish();

 private:
  void compress(const uint8_t block[64]);

  uint32_t state_[8];
  uint64_t length_ = 0;  // bytes fed so far
  uint8_t buffer_[64];
  size_t buffered_ = 0;
};

Key32 sha256(std::span<const uint8_t> data);
Key32 sha256_concat(std::span<const uint8_t> a, std::span<const uint8_t> b);

Key32 hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> data);

// WireGuard-style HKDF chain on HMAC-SHA256: t0 = HMAC(key, input),
// out1 = HMAC(t0, 0x01), out_n = HMAC(t0, out_{n-1} || n).
void hkdf(std::span<const uint8_t> key, std::span<const uint8_t> input,
          std::span<Key32> outputs);

}  // namespace sliceguard::crypto
