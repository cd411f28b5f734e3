#include "sliceguard/tunnel/handshake.hpp"

#include "sliceguard/crypto/chacha20poly1305.hpp"
#include "sliceguard/crypto/sha256.hpp"
#include "sliceguard/crypto/x25519.hpp"
#include "sliceguard/tunnel/errors.hpp"

namespace sliceguard::tunnel {

namespace {

using crypto::aead_open;
using crypto::aead_seal;
using crypto::hkdf;
using crypto::sha256;
using crypto::sha256_concat;

void mix_hash(Key32& h, std::span<const uint8_t> data) {
  h = sha256_concat(h, data);
}

void mix_key(Key32& ck, std::span<const uint8_t> input) {
  Key32 out[1];
  hkdf(ck, input, out);
  ck = out[0];
}

Key32 mix_key2(Key32& ck, std::span<const uint8_t> input) {
  Key32 out[2];
  hkdf(ck, input, out);
  ck = out[0];
  return out[1];
}

Key32 dh(const Key32& private_key, const Key32& public_key) {
  return crypto::x25519(private_key, public_key);
}

void chain_init(Key32& ck, Key32& h, const Key32& responder_static) {
  Bytes label = to_bytes(kProtocolLabel);
  ck = sha256(label);
  h = sha256_concat(ck, label);
  mix_hash(h, responder_static);
}

uint32_t fresh_index(crypto::RandomSource& rng) {
  uint32_t idx = rng.next_u32();
  return idx == 0 ? 1 : idx;  // zero reserved as "unset"
}

}  // namespace

Tai64n tai64n_from_sim(SimTime now) {
  Tai64n t;
  uint64_t seconds = uint64_t(now / kSecond);
  uint32_t nanos = uint32_t(now % kSecond);
  store_be64(t.data(), uint64_t(0x4000000000000000ULL) + seconds);
  store_be32(t.data() + 8, nanos);
  return t;
}

InitiateResult initiate(const StaticKeypair& local, const Key32& remote_public,
                        const Key32& psk, SimTime now,
                        crypto::RandomSource& rng, SessionLimits) {
  InitiateResult r;
  HandshakeState& st = r.state;
  st.role = Role::initiator;
  st.local_static = local;
  st.remote_static = remote_public;
  st.preshared_key = psk;
  st.local_index = fresh_index(rng);

  chain_init(st.chaining_key, st.transcript_hash, remote_public);

  st.local_ephemeral = generate_keypair(rng);
  r.frame.sender_index = st.local_index;
  r.frame.ephemeral = st.local_ephemeral.public_key;
  mix_key(st.chaining_key, st.local_ephemeral.public_key);
  mix_hash(st.transcript_hash, st.local_ephemeral.public_key);

  Key32 k = mix_key2(st.chaining_key, dh(st.local_ephemeral.private_key, remote_public));
  aead_seal(k, 0, st.transcript_hash, local.public_key, r.frame.enc_static.data());
  mix_hash(st.transcript_hash, r.frame.enc_static);

  k = mix_key2(st.chaining_key, dh(local.private_key, remote_public));
  Tai64n ts = tai64n_from_sim(now);
  aead_seal(k, 0, st.transcript_hash, ts, r.frame.enc_timestamp.data());
  mix_hash(st.transcript_hash, r.frame.enc_timestamp);

  return r;
}

RespondResult respond(const StaticKeypair& local, const Key32& psk,
                      const InitiationFrame& msg, InitiatorTimestamps& seen,
                      SimTime now, crypto::RandomSource& rng,
                      SessionLimits limits) {
  Key32 ck, h;
  chain_init(ck, h, local.public_key);

  mix_key(ck, msg.ephemeral);
  mix_hash(h, msg.ephemeral);

  Key32 k = mix_key2(ck, dh(local.private_key, msg.ephemeral));
  RespondResult r;
  if (!aead_open(k, 0, h, msg.enc_static, r.initiator_static.data()))
    throw AuthenticationError("initiation static decryption failed");
  mix_hash(h, msg.enc_static);

  k = mix_key2(ck, dh(local.private_key, r.initiator_static));
  Tai64n ts;
  if (!aead_open(k, 0, h, msg.enc_timestamp, ts.data()))
    throw AuthenticationError("initiation timestamp decryption failed");
  mix_hash(h, msg.enc_timestamp);

  auto [it, inserted] = seen.try_emplace(r.initiator_static, ts);
  if (!inserted) {
    if (std::memcmp(ts.data(), it->second.data(), ts.size()) <= 0)
      throw StaleTimestamp();
    it->second = ts;
  }

  // response message
  uint32_t local_index = fresh_index(rng);
  r.frame.sender_index = local_index;
  r.frame.receiver_index = msg.sender_index;
  StaticKeypair eph = generate_keypair(rng);
  r.frame.ephemeral = eph.public_key;
  mix_key(ck, eph.public_key);
  mix_hash(h, eph.public_key);
  mix_key(ck, dh(eph.private_key, msg.ephemeral));
  mix_key(ck, dh(eph.private_key, r.initiator_static));

  Key32 out[3];
  hkdf(ck, psk, out);
  ck = out[0];
  mix_hash(h, out[1]);
  k = out[2];
  aead_seal(k, 0, h, {}, r.frame.enc_empty.data());
  mix_hash(h, r.frame.enc_empty);

  Key32 keys[2];
  hkdf(ck, {}, keys);
  // keys[0] flows initiator->responder, keys[1] the other way
  r.session = TransportSession(Role::responder, keys[1], keys[0], local_index,
                               msg.sender_index, h, now, limits);
  return r;
}

TransportSession finalize(const HandshakeState& state, const ResponseFrame& msg,
                          SimTime now, SessionLimits limits) {
  if (state.role != Role::initiator)
    throw TunnelError("finalize requires an initiator handshake state");
  if (msg.receiver_index != state.local_index) throw IndexMismatch();

  Key32 ck = state.chaining_key;
  Key32 h = state.transcript_hash;

  mix_key(ck, msg.ephemeral);
  mix_hash(h, msg.ephemeral);
  mix_key(ck, dh(state.local_ephemeral.private_key, msg.ephemeral));
  mix_key(ck, dh(state.local_static.private_key, msg.ephemeral));

  Key32 out[3];
  hkdf(ck, state.preshared_key, out);
  ck = out[0];
  mix_hash(h, out[1]);
  Key32 k = out[2];
  uint8_t empty_out[1];
  if (!aead_open(k, 0, h, msg.enc_empty, empty_out))
    throw AuthenticationError("response decryption failed");
  mix_hash(h, msg.enc_empty);

  Key32 keys[2];
  hkdf(ck, {}, keys);
  return TransportSession(Role::initiator, keys[0], keys[1], state.local_index,
                          msg.sender_index, h, now, limits);
}

}  // namespace sliceguard::tunnel
