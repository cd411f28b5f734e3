#include "sliceguard/crypto/x25519.hpp"

namespace sliceguard::crypto {

namespace {

// GF(2^255 - 19) element, five 51-bit limbs, little-endian.
struct Fe {
  uint64_t v[5];
};

using u64 = uint64_t;
using u128 = unsigned __int128;

constexpr u64 kMask51 = 0x7ffffffffffff;

Fe fe_frombytes(const uint8_t s[32]) {
  Fe h;
  h.v[0] = load_le64(s) & kMask51;
  h.v[1] = (load_le64(s + 6) >> 3) & kMask51;
  h.v[2] = (load_le64(s + 12) >> 6) & kMask51;
  h.v[3] = (load_le64(s + 19) >> 1) & kMask51;
  h.v[4] = (load_le64(s + 24) >> 12) & kMask51;
  return h;
}

void fe_tobytes(uint8_t s[32], const Fe& in) {
  // fully carry, then reduce to canonical form below p
  u64 t[5];
  std::memcpy(t, in.v, sizeof(t));
  for (int pass = 0; pass < 2; ++pass) {
    t[1] += t[0] >> 51; t[0] &= kMask51;
    t[2] += t[1] >> 51; t[1] &= kMask51;
    t[3] += t[2] >> 51; t[2] &= kMask51;
    t[4] += t[3] >> 51; t[3] &= kMask51;
    t[0] += 19 * (t[4] >> 51); t[4] &= kMask51;
  }
  // now t < 2^255 + small; compute t + 19, use high bit to decide t - p
  u64 c = (t[0] + 19) >> 51;
  c = (t[1] + c) >> 51;
  c = (t[2] + c) >> 51;
  c = (t[3] + c) >> 51;
  c = (t[4] + c) >> 51;
  t[0] += 19 * c;
  t[1] += t[0] >> 51; t[0] &= kMask51;
  t[2] += t[1] >> 51; t[1] &= kMask51;
  t[3] += t[2] >> 51; t[2] &= kMask51;
  t[4] += t[3] >> 51; t[3] &= kMask51;
  t[4] &= kMask51;

  store_le64(s, t[0] | t[1] << 51);
  store_le64(s + 8, t[1] >> 13 | t[2] << 38);
  store_le64(s + 16, t[2] >> 26 | t[3] << 25);
  store_le64(s + 24, t[3] >> 39 | t[4] << 12);
}

Fe fe_add(const Fe& a, const Fe& b) {
  Fe r;
  for (int i = 0; i < 5; ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

Fe fe_sub(const Fe& a, const Fe& b) {
  // a + 2p - b keeps limbs positive
  Fe r;
  r.v[0] = a.v[0] + 0xfffffffffffda - b.v[0];
  r.v[1] = a.v[1] + 0xffffffffffffe - b.v[1];
  r.v[2] = a.v[2] + 0xffffffffffffe - b.v[2];
  r.v[3] = a.v[3] + 0xffffffffffffe - b.v[3];
  r.v[4] = a.v[4] + 0xffffffffffffe - b.v[4];
  return r;
}

Fe fe_mul(const Fe& a, const Fe& b) {
  u64 a0 = a.v[0], a1 = a.v[1], a2 = a.v[2], a3 = a.v[3], a4 = a.v[4];
  u64 b0 = b.v[0], b1 = b.v[1], b2 = b.v[2], b3 = b.v[3], b4 = b.v[4];
  u64 b1_19 = b1 * 19, b2_19 = b2 * 19, b3_19 = b3 * 19, b4_19 = b4 * 19;

  u128 t0 = u128(a0) * b0 + u128(a1) * b4_19 + u128(a2) * b3_19 +
            u128(a3) * b2_19 + u128(a4) * b1_19;
  u128 t1 = u128(a0) * b1 + u128(a1) * b0 + u128(a2) * b4_19 +
            u128(a3) * b3_19 + u128(a4) * b2_19;
  u128 t2 = u128(a0) * b2 + u128(a1) * b1 + u128(a2) * b0 +
            u128(a3) * b4_19 + u128(a4) * b3_19;
  u128 t3 = u128(a0) * b3 + u128(a1) * b2 + u128(a2) * b1 + u128(a3) * b0 +
            u128(a4) * b4_19;
  u128 t4 = u128(a0) * b4 + u128(a1) * b3 + u128(a2) * b2 + u128(a3) * b1 +
            u128(a4) * b0;

  Fe r;
  u64 c;
  r.v[0] = u64(t0) & kMask51; c = u64(t0 >> 51);
  t1 += c;
  r.v[1] = u64(t1) & kMask51; c = u64(t1 >> 51);
  t2 += c;
  r.v[2] = u64(t2) & kMask51; c = u64(t2 >> 51);
  t3 += c;
  r.v[3] = u64(t3) & kMask51; c = u64(t3 >> 51);
  t4 += c;
  r.v[4] = u64(t4) & kMask51; c = u64(t4 >> 51);
  r.v[0] += c * 19;
  c = r.v[0] >> 51; r.v[0] &= kMask51;
  r.v[1] += c;
  return r;
}

Fe fe_sq(const Fe& a) { return fe_mul(a, a); }

Fe fe_mul_small(const Fe& a, u64 s) {
  u128 t0 = u128(a.v[0]) * s;
  u128 t1 = u128(a.v[1]) * s;
  u128 t2 = u128(a.v[2]) * s;
  u128 t3 = u128(a.v[3]) * s;
  u128 t4 = u128(a.v[4]) * s;
  Fe r;
  u64 c;
  r.v[0] = u64(t0) & kMask51; c = u64(t0 >> 51);
  t1 += c;
  r.v[1] = u64(t1) & kMask51; c = u64(t1 >> 51);
  t2 += c;
  r.v[2] = u64(t2) & kMask51; c = u64(t2 >> 51);
  t3 += c;
  r.v[3] = u64(t3) & kMask51; c = u64(t3 >> 51);
  t4 += c;
  r.v[4] = u64(t4) & kMask51; c = u64(t4 >> 51);
  r.v[0] += c * 19;
  return r;
}

// constant-time conditional swap
void fe_cswap(u64 swap, Fe& a, Fe& b) {
  u64 mask = 0 - swap;
  for (int i = 0; i < 5; ++i) {
    u64 x = mask & (a.v[i] ^ b.v[i]);
    a.v[i] ^= x;
    b.v[i] ^= x;
  }
}

Fe fe_invert(const Fe& z) {
  // z^(p-2) with the addition chain from the curve25519 reference
  Fe z2 = fe_sq(z);                       // 2
  Fe t = fe_sq(z2);                       // 4
  t = fe_sq(t);                           // 8
  Fe z9 = fe_mul(t, z);                   // 9
  Fe z11 = fe_mul(z9, z2);                // 11
  t = fe_sq(z11);                         // 22
  Fe z2_5_0 = fe_mul(t, z9);              // 31 = 2^5 - 2^0
  t = fe_sq(z2_5_0);
  for (int i = 0; i < 4; ++i) t = fe_sq(t);
  Fe z2_10_0 = fe_mul(t, z2_5_0);         // 2^10 - 2^0
  t = fe_sq(z2_10_0);
  for (int i = 0; i < 9; ++i) t = fe_sq(t);
  Fe z2_20_0 = fe_mul(t, z2_10_0);        // 2^20 - 2^0
  t = fe_sq(z2_20_0);
  for (int i = 0; i < 19; ++i) t = fe_sq(t);
  t = fe_mul(t, z2_20_0);                 // 2^40 - 2^0
  t = fe_sq(t);
  for (int i = 0; i < 9; ++i) t = fe_sq(t);
  Fe z2_50_0 = fe_mul(t, z2_10_0);        // 2^50 - 2^0
  t = fe_sq(z2_50_0);
  for (int i = 0; i < 49; ++i) t = fe_sq(t);
  Fe z2_100_0 = fe_mul(t, z2_50_0);       // 2^100 - 2^0
  t = fe_sq(z2_100_0);
  for (int i = 0; i < 99; ++i) t = fe_sq(t);
  t = fe_mul(t, z2_100_0);                // 2^200 - 2^0
  t = fe_sq(t);
  for (int i = 0; i < 49; ++i) t = fe_sq(t);
  t = fe_mul(t, z2_50_0);                 // 2^250 - 2^0
  t = fe_sq(t);
  t = fe_sq(t);
  t = fe_sq(t);
  t = fe_sq(t);
  t = fe_sq(t);                           // 2^255 - 2^5
  return fe_mul(t, z11);                  // 2^255 - 21 = p - 2
}

}  // namespace

void x25519_clamp(Key32& scalar) {
  scalar[0] &= 248;
  scalar[31] &= 127;
  scalar[31] |= 64;
}

Key32 x25519(const Key32& scalar, const Key32& point) {
  Key32 e = scalar;
  x25519_clamp(e);

  uint8_t pt[32];
  std::memcpy(pt, point.data(), 32);
  pt[31] &= 127;  // ignore the unused high bit (RFC 7748)

  Fe x1 = fe_frombytes(pt);
  Fe x2{{1, 0, 0, 0, 0}};
  Fe z2{{0, 0, 0, 0, 0}};
  Fe x3 = x1;
  Fe z3{{1, 0, 0, 0, 0}};

  u64 swap = 0;
  for (int t = 254; t >= 0; --t) {
    u64 bit = (e[t >> 3] >> (t & 7)) & 1;
    swap ^= bit;
    fe_cswap(swap, x2, x3);
    fe_cswap(swap, z2, z3);
    swap = bit;

    Fe a = fe_add(x2, z2);
    Fe aa = fe_sq(a);
    Fe b = fe_sub(x2, z2);
    Fe bb = fe_sq(b);
    Fe eb = fe_sub(aa, bb);
    Fe c = fe_add(x3, z3);
    Fe d = fe_sub(x3, z3);
    Fe da = fe_mul(d, a);
    Fe cb = fe_mul(c, b);
    x3 = fe_sq(fe_add(da, cb));
    z3 = fe_mul(x1, fe_sq(fe_sub(da, cb)));
    x2 = fe_mul(aa, bb);
    z2 = fe_mul(eb, fe_add(aa, fe_mul_small(eb, 121665)));
  }
  fe_cswap(swap, x2, x3);
  fe_cswap(swap, z2, z3);

  Fe out = fe_mul(x2, fe_invert(z2));
  Key32 result;
  fe_tobytes(result.data(), out);
  return result;
}

Key32 x25519_base(const Key32& scalar) {
  Key32 base{};
  base[0] = 9;
  return x25519(scalar, base);
}

}  // namespace sliceguard::crypto
