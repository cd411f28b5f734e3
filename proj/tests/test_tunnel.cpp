#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sodium.h>

#include <set>

#include "sliceguard/tunnel/errors.hpp"
#include "sliceguard/tunnel/handshake.hpp"

using namespace sliceguard;
using namespace sliceguard::tunnel;

namespace {

struct Pair {
  StaticKeypair initiator;
  StaticKeypair responder;
  Key32 psk{};
};

Pair make_pair(crypto::ChaChaRng& rng, bool with_psk = false) {
  Pair p;
  p.initiator = generate_keypair(rng);
  p.responder = generate_keypair(rng);
  if (with_psk) rng.fill(p.psk);
  return p;
}

struct Completed {
  TransportSession a;  // initiator side
  TransportSession b;  // responder side
};

Completed complete_handshake(const Pair& p, crypto::ChaChaRng& rng,
                             SimTime now = 0) {
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, now, rng);
  InitiatorTimestamps seen;
  auto resp = respond(p.responder, p.psk, init.frame, seen, now, rng);
  auto session = finalize(init.state, resp.frame, now);
  return {session, resp.session};
}

}  // namespace

TEST_CASE("fixed seed produces identical keypairs") {
  crypto::ChaChaRng a(5), b(5);
  StaticKeypair ka = generate_keypair(a);
  StaticKeypair kb = generate_keypair(b);
  CHECK(ka.private_key == kb.private_key);
  CHECK(ka.public_key == kb.public_key);
  CHECK((ka.private_key[31] & 0x80) == 0);
  CHECK((ka.private_key[31] & 0x40) == 0x40);
  CHECK(derive_public(ka.private_key) == ka.public_key);
}

TEST_CASE("key text codec") {
  Key32 zero{};
  CHECK(encode_key(zero) == "AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA=");
  crypto::ChaChaRng rng(6);
  for (int i = 0; i < 20; ++i) {
    Key32 k;
    rng.fill(k);
    CHECK(decode_key(encode_key(k)) == k);
  }
  CHECK_THROWS_AS(decode_key(std::string(43, 'A')), MalformedKey);
  CHECK_THROWS_AS(decode_key(std::string(44, '!')), MalformedKey);
  std::string no_pad = encode_key(zero);
  no_pad[43] = 'A';
  CHECK_THROWS_AS(decode_key(no_pad), MalformedKey);
}

TEST_CASE("initiation frame layout and length") {
  crypto::ChaChaRng rng(7);
  Pair p = make_pair(rng);
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, 1234, rng);
  Bytes wire = encode(init.frame);
  CHECK(wire.size() == kInitiationFrameSize);
  CHECK(wire.size() == 4 + 4 + 32 + (32 + 16) + (12 + 16));
  CHECK(wire[0] == 1);
  InitiationFrame back = decode_initiation(wire);
  CHECK(back.sender_index == init.frame.sender_index);
  CHECK(back.ephemeral == init.frame.ephemeral);

  auto init2 = initiate(p.initiator, p.responder.public_key, p.psk, 1234, rng);
  CHECK(init2.frame.ephemeral != init.frame.ephemeral);
}

TEST_CASE("initiation transcript matches an independent libsodium walk") {
  REQUIRE(sodium_init() >= 0);
  crypto::ChaChaRng keys_rng(8);
  Pair p = make_pair(keys_rng, true);
  SimTime now = 7'500'000'123;  // 7.5s and change

  // two rngs from one seed: one feeds initiate(), the twin feeds the oracle
  crypto::ChaChaRng rng(99), twin(99);
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, now, rng);

  auto hmac = [](std::span<const uint8_t> key, std::span<const uint8_t> data) {
    Key32 out;
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, data.data(), data.size());
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
  };
  auto sha = [](const Bytes& data) {
    Key32 out;
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
  };
  auto cat = [](std::span<const uint8_t> a, std::span<const uint8_t> b) {
    Bytes out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
  };
  auto kdf1 = [&](Key32& ck, std::span<const uint8_t> in) {
    Key32 prk = hmac(ck, in);
    uint8_t one = 1;
    ck = hmac(prk, {&one, 1});
  };
  auto kdf2 = [&](Key32& ck, std::span<const uint8_t> in) {
    Key32 prk = hmac(ck, in);
    uint8_t one = 1;
    Key32 t1 = hmac(prk, {&one, 1});
    Bytes t2_in(t1.begin(), t1.end());
    t2_in.push_back(2);
    Key32 t2 = hmac(prk, t2_in);
    ck = t1;
    return t2;
  };
  auto aead = [](const Key32& key, std::span<const uint8_t> ad,
                 std::span<const uint8_t> pt) {
    Bytes out(pt.size() + 16);
    uint8_t nonce[12] = {0};
    unsigned long long len = 0;
    crypto_aead_chacha20poly1305_ietf_encrypt(out.data(), &len, pt.data(),
                                              pt.size(), ad.data(), ad.size(),
                                              nullptr, nonce, key.data());
    return out;
  };
  auto dh = [](const Key32& priv, const Key32& pub) {
    Key32 out;
    REQUIRE(crypto_scalarmult(out.data(), priv.data(), pub.data()) == 0);
    return out;
  };

  // replay the construction: chain init, ephemeral, es, static, ss
  Bytes label = to_bytes(kProtocolLabel);
  Key32 ck = sha(label);
  Key32 h = sha(cat(ck, label));
  h = sha(cat(h, p.responder.public_key));

  // the twin rng yields the same index draw and ephemeral scalar
  uint32_t index = twin.next_u32();
  if (index == 0) index = 1;
  StaticKeypair eph = generate_keypair(twin);
  CHECK(init.frame.sender_index == index);
  CHECK(init.frame.ephemeral == eph.public_key);

  kdf1(ck, eph.public_key);
  h = sha(cat(h, eph.public_key));
  Key32 k = kdf2(ck, dh(eph.private_key, p.responder.public_key));
  Bytes enc_static = aead(k, h, p.initiator.public_key);
  CHECK(Bytes(init.frame.enc_static.begin(), init.frame.enc_static.end()) ==
        enc_static);
  h = sha(cat(h, enc_static));

  k = kdf2(ck, dh(p.initiator.private_key, p.responder.public_key));
  Tai64n ts{};
  store_be64(ts.data(), 0x4000000000000000ULL + 7);
  store_be32(ts.data() + 8, 500'000'123);
  Bytes enc_ts = aead(k, h, ts);
  CHECK(Bytes(init.frame.enc_timestamp.begin(), init.frame.enc_timestamp.end()) ==
        enc_ts);
  h = sha(cat(h, enc_ts));
  CHECK(init.state.transcript_hash == h);
  CHECK(init.state.chaining_key == ck);
}

TEST_CASE("handshake yields cross-matching directional keys") {
  crypto::ChaChaRng rng(9);
  for (int i = 0; i < 50; ++i) {
    Pair p = make_pair(rng, i % 2 == 1);
    Completed done = complete_handshake(p, rng);
    CHECK(done.a.send_key() == done.b.recv_key());
    CHECK(done.a.recv_key() == done.b.send_key());
    CHECK(done.a.send_key() != done.a.recv_key());
    CHECK(done.a.handshake_hash() == done.b.handshake_hash());
    CHECK(done.a.local_index() == done.b.remote_index());
    CHECK(done.a.remote_index() == done.b.local_index());
  }
}

TEST_CASE("two handshakes between the same peers derive different keys") {
  crypto::ChaChaRng rng(10);
  Pair p = make_pair(rng);
  Completed first = complete_handshake(p, rng, 0);
  Completed second = complete_handshake(p, rng, 1000);
  CHECK(first.a.send_key() != second.a.send_key());
}

TEST_CASE("responder rejects a replayed initiation") {
  crypto::ChaChaRng rng(11);
  Pair p = make_pair(rng);
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, 5000, rng);
  InitiatorTimestamps seen;
  respond(p.responder, p.psk, init.frame, seen, 5000, rng);
  CHECK_THROWS_AS(respond(p.responder, p.psk, init.frame, seen, 6000, rng),
                  StaleTimestamp);
  // a fresh initiation with a later timestamp is fine
  auto init2 = initiate(p.initiator, p.responder.public_key, p.psk, 6000, rng);
  CHECK_NOTHROW(respond(p.responder, p.psk, init2.frame, seen, 6000, rng));
}

TEST_CASE("corrupted static field fails authentication") {
  crypto::ChaChaRng rng(12);
  Pair p = make_pair(rng);
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, 0, rng);
  init.frame.enc_static[7] ^= 0x10;
  InitiatorTimestamps seen;
  CHECK_THROWS_AS(respond(p.responder, p.psk, init.frame, seen, 0, rng),
                  AuthenticationError);
}

TEST_CASE("psk mismatch surfaces at finalize") {
  crypto::ChaChaRng rng(13);
  Pair p = make_pair(rng);
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, 0, rng);
  InitiatorTimestamps seen;
  Key32 wrong_psk{};
  wrong_psk[0] = 1;
  auto resp = respond(p.responder, wrong_psk, init.frame, seen, 0, rng);
  CHECK_THROWS_AS(finalize(init.state, resp.frame, 0), AuthenticationError);
}

TEST_CASE("finalize checks the receiver index") {
  crypto::ChaChaRng rng(14);
  Pair p = make_pair(rng);
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, 0, rng);
  InitiatorTimestamps seen;
  auto resp = respond(p.responder, p.psk, init.frame, seen, 0, rng);
  resp.frame.receiver_index ^= 0xdeadbeef;
  CHECK_THROWS_AS(finalize(init.state, resp.frame, 0), IndexMismatch);
}

TEST_CASE("transport round trip, counters, and frame overhead") {
  crypto::ChaChaRng rng(15);
  Pair p = make_pair(rng);
  Completed done = complete_handshake(p, rng);

  Bytes msg = to_bytes("attach-request imsi 001010123456789");
  TransportFrame f0 = done.a.seal(msg, 0);
  TransportFrame f1 = done.a.seal(msg, 0);
  CHECK(f0.counter == 0);
  CHECK(f1.counter == 1);
  CHECK(f0.receiver_index == done.b.local_index());
  CHECK(done.b.open(f0, 0) == msg);
  CHECK(done.b.open(f1, 0) == msg);

  Bytes big(1000, 0xab);
  TransportFrame f2 = done.a.seal(big, 0);
  CHECK(encode(f2).size() == 1032);
  CHECK(encode(f2).size() - big.size() == kTransportOverhead);
}

TEST_CASE("replay window semantics") {
  crypto::ChaChaRng rng(16);
  Pair p = make_pair(rng);
  Completed done = complete_handshake(p, rng);

  std::vector<TransportFrame> frames;
  for (int i = 0; i < 7; ++i) frames.push_back(done.a.seal({}, 0));

  SUBCASE("duplicate rejected") {
    CHECK_NOTHROW(done.b.open(frames[3], 0));
    CHECK_THROWS_AS(done.b.open(frames[3], 0), ReplayError);
  }
  SUBCASE("out of order within the window accepted once") {
    CHECK_NOTHROW(done.b.open(frames[6], 0));
    CHECK_NOTHROW(done.b.open(frames[5], 0));
    CHECK_THROWS_AS(done.b.open(frames[5], 0), ReplayError);
  }
  SUBCASE("window boundary arithmetic") {
    // counter 10000 then counter 1: 10000 - 1 >= 2048 so the second is stale
    Completed fresh = complete_handshake(p, rng, 10);
    TransportFrame f1;
    for (int i = 0; i <= 10000; ++i) {
      TransportFrame f = fresh.a.seal({}, 0);
      if (f.counter == 1) f1 = f;
      if (f.counter == 10000) CHECK_NOTHROW(fresh.b.open(f, 0));
    }
    CHECK_THROWS_AS(fresh.b.open(f1, 0), ReplayError);

    // counter exactly inside the window edge stays acceptable
    Completed fresh2 = complete_handshake(p, rng, 20);
    TransportFrame edge;
    for (int i = 0; i <= 10000; ++i) {
      TransportFrame f = fresh2.a.seal({}, 0);
      if (f.counter == 10000 - 2047) edge = f;
      if (f.counter == 10000) CHECK_NOTHROW(fresh2.b.open(f, 0));
    }
    CHECK_NOTHROW(fresh2.b.open(edge, 0));
  }
}

TEST_CASE("wrong receiver index and corrupt ciphertext are rejected") {
  crypto::ChaChaRng rng(17);
  Pair p = make_pair(rng);
  Completed done = complete_handshake(p, rng);
  TransportFrame f = done.a.seal(to_bytes("x"), 0);

  TransportFrame wrong = f;
  wrong.receiver_index += 1;
  CHECK_THROWS_AS(done.b.open(wrong, 0), IndexMismatch);

  TransportFrame corrupt = f;
  corrupt.ciphertext[0] ^= 0x80;
  CHECK_THROWS_AS(done.b.open(corrupt, 0), AuthenticationError);
  // the failed open must not burn the counter
  CHECK_NOTHROW(done.b.open(f, 0));
}

TEST_CASE("rekey status thresholds and expiry") {
  crypto::ChaChaRng rng(18);
  Pair p = make_pair(rng);
  Completed done = complete_handshake(p, rng, 0);

  CHECK(done.a.rekey_status(0) == RekeyStatus::fresh);
  CHECK(done.a.rekey_status(119 * kSecond) == RekeyStatus::fresh);
  CHECK(done.a.rekey_status(150 * kSecond) == RekeyStatus::rekey_recommended);
  CHECK(done.a.rekey_status(181 * kSecond) == RekeyStatus::expired);
  CHECK_THROWS_AS(done.a.seal({}, 181 * kSecond), SessionExpired);
  CHECK_THROWS_AS(done.b.open(done.a.seal({}, 0), 181 * kSecond), SessionExpired);

  SessionLimits tight;
  tight.rekey_after = 1 * kSecond;
  tight.expire_after = 2 * kSecond;
  crypto::ChaChaRng rng2(19);
  auto init = initiate(p.initiator, p.responder.public_key, p.psk, 0, rng2, tight);
  InitiatorTimestamps seen;
  auto resp = respond(p.responder, p.psk, init.frame, seen, 0, rng2, tight);
  auto session = finalize(init.state, resp.frame, 0, tight);
  CHECK(session.rekey_status(1500 * kMillisecond) == RekeyStatus::rekey_recommended);
  CHECK(session.rekey_status(2 * kSecond) == RekeyStatus::expired);
}

TEST_CASE("frames are byte-identical under an injected rng and clock") {
  auto run = [] {
    crypto::ChaChaRng rng(77);
    Pair p = make_pair(rng);
    auto init = initiate(p.initiator, p.responder.public_key, p.psk, 42'000, rng);
    InitiatorTimestamps seen;
    auto resp = respond(p.responder, p.psk, init.frame, seen, 42'000, rng);
    auto session = finalize(init.state, resp.frame, 42'000);
    Bytes all = encode(init.frame);
    Bytes r = encode(resp.frame);
    all.insert(all.end(), r.begin(), r.end());
    Bytes t = encode(session.seal(to_bytes("probe"), 42'000));
    all.insert(all.end(), t.begin(), t.end());
    return all;
  };
  CHECK(run() == run());
}

TEST_CASE("malformed frames are rejected with MalformedFrame") {
  Bytes empty;
  CHECK_THROWS_AS(frame_type(empty), MalformedFrame);
  Bytes junk = {9, 0, 0, 0};
  CHECK_THROWS_AS(frame_type(junk), MalformedFrame);
  Bytes short_init(kInitiationFrameSize - 1, 0);
  short_init[0] = 1;
  CHECK_THROWS_AS(decode_initiation(short_init), MalformedFrame);
  Bytes bad_reserved(kResponseFrameSize, 0);
  bad_reserved[0] = 2;
  bad_reserved[1] = 1;
  CHECK_THROWS_AS(decode_response(bad_reserved), MalformedFrame);
  Bytes tiny_transport = {4, 0, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(decode_transport(tiny_transport), MalformedFrame);
}
