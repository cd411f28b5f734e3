#include "sliceguard/crypto/random.hpp"

#include <random>

#include "sliceguard/crypto/sha256.hpp"

namespace sliceguard::crypto {

ChaChaRng::ChaChaRng(uint64_t seed) {
  uint8_t material[16] = {'s', 'g', '-', 'r', 'n', 'g', '-', 'v', '1'};
  store_le64(material + 8, seed);
  key_ = sha256(material);
}

ChaChaRng::ChaChaRng(const Key32& key) : key_(key) {}

void ChaChaRng::fill(std::span<uint8_t> out) {
  // keystream over zeros; nonce fixed, 32-bit block counter advances
  static const uint8_t kNonce[12] = {0};
  Bytes zeros(out.size(), 0);
  // chacha20_xor uses a 32-bit starting counter; track 64-byte blocks
  chacha20_xor(key_, uint32_t(counter_), kNonce, zeros, out.data());
  counter_ += (out.size() + 63) / 64;
}

ChaChaRng ChaChaRng::fork(std::string_view label) const {
  Sha256 h;
  h.update(key_);
  h.update(to_bytes("/fork/"));
  h.update(to_bytes(label));
  return ChaChaRng(h.finish());
}

void SystemRandom::fill(std::span<uint8_t> out) {
  static thread_local std::random_device dev;
  for (auto& b : out) b = uint8_t(dev());
}

}  // namespace sliceguard::crypto
