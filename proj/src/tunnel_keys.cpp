#include "sliceguard/tunnel/keys.hpp"

#include "sliceguard/crypto/x25519.hpp"
#include "sliceguard/tunnel/errors.hpp"

namespace sliceguard::tunnel {

namespace {
constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int alphabet_index(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}
}  // namespace

StaticKeypair generate_keypair(crypto::RandomSource& rng) {
  StaticKeypair kp;
  rng.fill(kp.private_key);
  crypto::x25519_clamp(kp.private_key);
  kp.public_key = crypto::x25519_base(kp.private_key);
  return kp;
}

Key32 derive_public(const Key32& private_key) {
  return crypto::x25519_base(private_key);
}

std::string encode_key(const Key32& key) {
  std::string out;
  out.reserve(44);
  for (int i = 0; i < 30; i += 3) {
    uint32_t v = uint32_t(key[i]) << 16 | uint32_t(key[i + 1]) << 8 | key[i + 2];
    out.push_back(kAlphabet[v >> 18 & 63]);
    out.push_back(kAlphabet[v >> 12 & 63]);
    out.push_back(kAlphabet[v >> 6 & 63]);
    out.push_back(kAlphabet[v & 63]);
  }
  uint32_t v = uint32_t(key[30]) << 8 | key[31];
  out.push_back(kAlphabet[v >> 10 & 63]);
  out.push_back(kAlphabet[v >> 4 & 63]);
  out.push_back(kAlphabet[(v << 2) & 63]);
  out.push_back('=');
  return out;
}

Key32 decode_key(const std::string& text) {
  if (text.size() != 44)
    throw MalformedKey("key must be 44 base64 characters, got " +
                       std::to_string(text.size()));
  if (text[43] != '=') throw MalformedKey("key must end with '='");
  int vals[44];
  for (int i = 0; i < 43; ++i) {
    vals[i] = alphabet_index(text[i]);
    if (vals[i] < 0)
      throw MalformedKey(std::string("invalid base64 character '") + text[i] + "'");
  }
  Key32 key;
  for (int g = 0; g < 10; ++g) {
    uint32_t v = uint32_t(vals[4 * g]) << 18 | uint32_t(vals[4 * g + 1]) << 12 |
                 uint32_t(vals[4 * g + 2]) << 6 | uint32_t(vals[4 * g + 3]);
    key[3 * g] = uint8_t(v >> 16);
    key[3 * g + 1] = uint8_t(v >> 8);
    key[3 * g + 2] = uint8_t(v);
  }
  uint32_t v = uint32_t(vals[40]) << 12 | uint32_t(vals[41]) << 6 | vals[42];
  if ((v & 3) != 0) throw MalformedKey("non-canonical trailing bits");
  key[30] = uint8_t(v >> 10);
  key[31] = uint8_t(v >> 2);
  return key;
}

void PeerDescriptor::validate() const {
  if (endpoint_port == 0) throw std::invalid_argument("endpoint_port out of range");
  if (allowed_cidrs.empty()) throw std::invalid_argument("allowed_cidrs empty");
  if (tunnel_address.empty()) throw std::invalid_argument("tunnel_address empty");
}

}  // namespace sliceguard::tunnel
