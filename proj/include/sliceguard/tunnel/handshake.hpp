#pragma once

#include <map>

#include "sliceguard/bytes.hpp"
#include "sliceguard/crypto/random.hpp"
#include "sliceguard/tunnel/frame.hpp"
#include "sliceguard/tunnel/keys.hpp"
#include "sliceguard/tunnel/session.hpp"

namespace sliceguard::tunnel {

// Two-message IK-pattern handshake over Curve25519 / HKDF-HMAC-SHA256 /
// ChaCha20Poly1305. Message 1 mixes ephemeral, es, static, ss; message 2
// mixes ephemeral, ee, se, psk.
constexpr std::string_view kProtocolLabel = "sliceguard v1 tunnel";

// TAI64N-style timestamp: 8-byte big-endian seconds with the TAI64 epoch
// offset, then 4-byte big-endian nanoseconds. Big-endian makes byte
// comparison equal numeric comparison.
using Tai64n = std::array<uint8_t, 12>;
Tai64n tai64n_from_sim(SimTime now);

struct HandshakeState {
  Key32 chaining_key{};
  Key32 transcript_hash{};
  StaticKeypair local_static;
  StaticKeypair local_ephemeral;
  Key32 remote_static{};
  Key32 preshared_key{};
  uint32_t local_index = 0;
  Role role = Role::initiator;
};

struct InitiateResult {
  HandshakeState state;
  InitiationFrame frame;
};

// Greatest initiation timestamp seen per initiator static key; the
// responder's defense against replayed initiations. Not persisted across
// restarts.
using InitiatorTimestamps = std::map<Key32, Tai64n>;

InitiateResult initiate(const StaticKeypair& local, const Key32& remote_public,
                        const Key32& psk, SimTime now,
                        crypto::RandomSource& rng,
                        SessionLimits limits = {});

struct RespondResult {
  ResponseFrame frame;
  TransportSession session;
  Key32 initiator_static{};  // for the caller's peer policy check
};

RespondResult respond(const StaticKeypair& local, const Key32& psk,
                      const InitiationFrame& msg, InitiatorTimestamps& seen,
                      SimTime now, crypto::RandomSource& rng,
                      SessionLimits limits = {});

TransportSession finalize(const HandshakeState& state, const ResponseFrame& msg,
                          SimTime now, SessionLimits limits = {});

}  // namespace sliceguard::tunnel
