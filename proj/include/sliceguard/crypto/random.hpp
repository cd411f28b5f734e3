#pragma once

#include <span>
#include <string_view>

#include "sliceguard/bytes.hpp"
#include "sliceguard/crypto/chacha20poly1305.hpp"

namespace sliceguard::crypto {

struct RandomSource {
  virtual ~RandomSource() = default;
  virtual void fill(std::span<uint8_t> out) = 0;

  Key32 key32() {
    Key32 k;
    fill(k);
    return k;
  }
  uint64_t next_u64() {
    uint8_t b[8];
    fill(b);
    return load_le64(b);
  }
  uint32_t next_u32() {
    uint8_t b[4];
    fill(b);
    return load_le32(b);
  }
  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }
};

// Deterministic ChaCha20-keystream generator. Forkable by label so
// independent subsystems draw from disjoint streams under one seed.
class ChaChaRng final : public RandomSource {
 public:
  explicit ChaChaRng(uint64_t seed);
  explicit ChaChaRng(const Key32& key);
  void fill(std::span<uint8_t> out) override;
  ChaChaRng fork(std::string_view label) const;

 private:
  Key32 key_;
  uint64_t counter_ = 0;
};

// Thin wrapper over the OS entropy source, for realtime demo use.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<uint8_t> out) override;
};

}  // namespace sliceguard::crypto
