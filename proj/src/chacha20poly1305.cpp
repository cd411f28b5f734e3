#include "sliceguard/crypto/chacha20poly1305.hpp"

namespace sliceguard::crypto {

namespace {

inline uint32_t rotl(uint32_t x, int n) { return x << n | x >> (32 - n); }

inline void quarter_round(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
  a += b; d ^= a; d = rotl(d, 16);
  c += d; b ^= c; b = rotl(b, 12);
  a += b; d ^= a; d = rotl(d, 8);
  c += d; b ^= c; b = rotl(b, 7);
}

void chacha20_block(const uint32_t state[16], uint8_t out[64]) {
  uint32_t x[16];
  std::memcpy(x, state, sizeof(x));
  for (int i = 0; i < 10; ++i) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) store_le32(out + 4 * i, x[i] + state[i]);
}

void init_state(uint32_t state[16], const Key32& key, uint32_t counter,
                const uint8_t nonce[12]) {
  state[0] = 0x61707865;
  state[1] = 0x3320646e;
  state[2] = 0x79622d32;
  state[3] = 0x6b206574;
  for (int i = 0; i < 8; ++i) state[4 + i] = load_le32(key.data() + 4 * i);
  state[12] = counter;
  state[13] = load_le32(nonce);
  state[14] = load_le32(nonce + 4);
  state[15] = load_le32(nonce + 8);
}

// 2^130 - 5 arithmetic with 64-bit limbs via __int128, donna-style.
void poly1305_impl(const uint8_t key[32], std::span<const uint8_t> msg,
                   uint8_t tag[16]) {
  using u64 = uint64_t;
  using u128 = unsigned __int128;

  u64 t0 = load_le64(key);
  u64 t1 = load_le64(key + 8);
  u64 r0 = t0 & 0xffc0fffffff;
  u64 r1 = ((t0 >> 44) | (t1 << 20)) & 0xfffffc0ffff;
  u64 r2 = (t1 >> 24) & 0x00ffffffc0f;

  u64 h0 = 0, h1 = 0, h2 = 0;
  const u64 s1 = r1 * 20;
  const u64 s2 = r2 * 20;

  size_t off = 0;
  while (off < msg.size()) {
    size_t take = std::min<size_t>(16, msg.size() - off);
    uint8_t block[16] = {0};
    std::memcpy(block, msg.data() + off, take);
    u64 m0 = load_le64(block);
    u64 m1 = load_le64(block + 8);
    u64 c0 = m0 & 0xfffffffffff;
    u64 c1 = ((m0 >> 44) | (m1 << 20)) & 0xfffffffffff;
    u64 c2 = (m1 >> 24) & 0x3ffffffffff;
    if (take == 16) {
      c2 |= u64(1) << 40;  // 2^128 bit
    } else {
      // pad byte 0x01 after the partial block, no high bit
      u64 bit = take * 8;
      if (bit < 44) {
        c0 |= u64(1) << bit;
      } else if (bit < 88) {
        c1 |= u64(1) << (bit - 44);
      } else {
        c2 |= u64(1) << (bit - 88);
      }
    }
    h0 += c0;
    h1 += c1;
    h2 += c2;

    u128 d0 = u128(h0) * r0 + u128(h1) * s2 + u128(h2) * s1;
    u128 d1 = u128(h0) * r1 + u128(h1) * r0 + u128(h2) * s2;
    u128 d2 = u128(h0) * r2 + u128(h1) * r1 + u128(h2) * r0;

    u64 carry = u64(d0 >> 44);
    h0 = u64(d0) & 0xfffffffffff;
    d1 += carry;
    carry = u64(d1 >> 44);
    h1 = u64(d1) & 0xfffffffffff;
    d2 += carry;
    carry = u64(d2 >> 42);
    h2 = u64(d2) & 0x3ffffffffff;
    h0 += carry * 5;
    carry = h0 >> 44;
    h0 &= 0xfffffffffff;
    h1 += carry;

    off += take;
  }

  // final reduction mod 2^130 - 5
  u64 carry = h1 >> 44;
  h1 &= 0xfffffffffff;
  h2 += carry;
  carry = h2 >> 42;
  h2 &= 0x3ffffffffff;
  h0 += carry * 5;
  carry = h0 >> 44;
  h0 &= 0xfffffffffff;
  h1 += carry;
  carry = h1 >> 44;
  h1 &= 0xfffffffffff;
  h2 += carry;
  carry = h2 >> 42;
  h2 &= 0x3ffffffffff;
  h0 += carry * 5;
  carry = h0 >> 44;
  h0 &= 0xfffffffffff;
  h1 += carry;

  // compute h + -p = h - (2^130 - 5)
  u64 g0 = h0 + 5;
  carry = g0 >> 44;
  g0 &= 0xfffffffffff;
  u64 g1 = h1 + carry;
  carry = g1 >> 44;
  g1 &= 0xfffffffffff;
  u64 g2 = h2 + carry - (u64(1) << 42);

  // select h if h < p, else h - p
  u64 mask = (g2 >> 63) - 1;  // all ones if g2 did not borrow
  g0 &= mask;
  g1 &= mask;
  g2 &= mask;
  mask = ~mask;
  h0 = (h0 & mask) | g0;
  h1 = (h1 & mask) | g1;
  h2 = (h2 & mask) | g2;

  // add pad (s part of the key)
  u64 p0 = load_le64(key + 16);
  u64 p1 = load_le64(key + 24);
  u128 f0 = u128(h0 | (h1 << 44)) + u128(p0);
  u128 f1 = u128((h1 >> 20) | (h2 << 24)) + u128(p1) + (f0 >> 64);
  store_le64(tag, u64(f0));
  store_le64(tag + 8, u64(f1));
}

void poly1305_aead_tag(const Key32& key, const uint8_t nonce[12],
                       std::span<const uint8_t> aad,
                       std::span<const uint8_t> ciphertext, uint8_t tag[16]) {
  uint32_t state[16];
  init_state(state, key, 0, nonce);
  uint8_t otk[64];
  chacha20_block(state, otk);

  Bytes mac_data;
  mac_data.reserve(aad.size() + ciphertext.size() + 32);
  mac_data.insert(mac_data.end(), aad.begin(), aad.end());
  mac_data.resize((mac_data.size() + 15) & ~size_t(15), 0);
  mac_data.insert(mac_data.end(), ciphertext.begin(), ciphertext.end());
  mac_data.resize((mac_data.size() + 15) & ~size_t(15), 0);
  uint8_t lens[16];
  store_le64(lens, aad.size());
  store_le64(lens + 8, ciphertext.size());
  mac_data.insert(mac_data.end(), lens, lens + 16);

  poly1305_impl(otk, mac_data, tag);
}

void make_nonce(uint8_t nonce[12], uint64_t counter) {
  std::memset(nonce, 0, 4);
  store_le64(nonce + 4, counter);
}

}  // namespace

void chacha20_xor(const Key32& key, uint32_t counter, const uint8_t nonce[12],
                  std::span<const uint8_t> in, uint8_t* out) {
  uint32_t state[16];
  init_state(state, key, counter, nonce);
  uint8_t block[64];
  size_t off = 0;
  while (off < in.size()) {
    chacha20_block(state, block);
    state[12]++;
    size_t take = std::min<size_t>(64, in.size() - off);
    for (size_t i = 0; i < take; ++i) out[off + i] = in[off + i] ^ block[i];
    off += take;
  }
}

void poly1305(const uint8_t key[32], std::span<const uint8_t> msg, uint8_t tag[16]) {
  poly1305_impl(key, msg, tag);
}

void aead_seal(const Key32& key, uint64_t nonce_counter,
               std::span<const uint8_t> aad, std::span<const uint8_t> plaintext,
               uint8_t* out) {
  uint8_t nonce[12];
  make_nonce(nonce, nonce_counter);
  chacha20_xor(key, 1, nonce, plaintext, out);
  poly1305_aead_tag(key, nonce, aad, {out, plaintext.size()},
                    out + plaintext.size());
}

bool aead_open(const Key32& key, uint64_t nonce_counter,
               std::span<const uint8_t> aad, std::span<const uint8_t> ciphertext,
               uint8_t* out) {
  if (ciphertext.size() < kAeadTagSize) return false;
  uint8_t nonce[12];
  make_nonce(nonce, nonce_counter);
  std::span<const uint8_t> body = ciphertext.first(ciphertext.size() - kAeadTagSize);
  uint8_t expect[16];
  poly1305_aead_tag(key, nonce, aad, body, expect);
  uint8_t diff = 0;
  const uint8_t* given = ciphertext.data() + body.size();
  for (int i = 0; i < 16; ++i) diff |= uint8_t(expect[i] ^ given[i]);
  if (diff != 0) return false;
  chacha20_xor(key, 1, nonce, body, out);
  return true;
}

}  // namespace sliceguard::crypto
