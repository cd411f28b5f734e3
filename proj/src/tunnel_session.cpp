#include "sliceguard/tunnel/session.hpp"

#include "sliceguard/crypto/chacha20poly1305.hpp"
#include "sliceguard/tunnel/errors.hpp"

namespace sliceguard::tunnel {

bool ReplayWindow::check(uint64_t counter) const {
  if (!any_) return true;
  if (counter > highest_) return true;
  if (highest_ - counter >= kSize) return false;
  uint64_t word = (counter / 64) % kWords;
  return (bitmap_[word] & (uint64_t(1) << (counter % 64))) == 0;
}

void ReplayWindow::update(uint64_t counter) {
  if (!any_) {
    any_ = true;
    highest_ = counter;
    bitmap_.fill(0);
  } else if (counter > highest_) {
    // clear the blocks the window slides over
    uint64_t cur_block = highest_ / 64;
    uint64_t new_block = counter / 64;
    uint64_t to_clear = std::min(new_block - cur_block, uint64_t(kWords));
    for (uint64_t i = 1; i <= to_clear; ++i) bitmap_[(cur_block + i) % kWords] = 0;
    highest_ = counter;
  }
  bitmap_[(counter / 64) % kWords] |= uint64_t(1) << (counter % 64);
}

TransportSession::TransportSession(Role role, const Key32& send_key,
                                   const Key32& recv_key, uint32_t local_index,
                                   uint32_t remote_index,
                                   const Key32& handshake_hash,
                                   SimTime established_at, SessionLimits limits)
    : role_(role),
      send_key_(send_key),
      recv_key_(recv_key),
      local_index_(local_index),
      remote_index_(remote_index),
      handshake_hash_(handshake_hash),
      established_at_(established_at),
      limits_(limits) {}

TransportSession::TransportSession(const TransportSession& other)
    : role_(other.role_),
      send_key_(other.send_key_),
      recv_key_(other.recv_key_),
      send_counter_(other.send_counter_.load()),
      messages_sealed_(other.messages_sealed_.load()),
      recv_window_(other.recv_window_),
      local_index_(other.local_index_),
      remote_index_(other.remote_index_),
      handshake_hash_(other.handshake_hash_),
      established_at_(other.established_at_),
      limits_(other.limits_) {}

TransportSession& TransportSession::operator=(const TransportSession& other) {
  if (this == &other) return *this;
  role_ = other.role_;
  send_key_ = other.send_key_;
  recv_key_ = other.recv_key_;
  send_counter_.store(other.send_counter_.load());
  messages_sealed_.store(other.messages_sealed_.load());
  recv_window_ = other.recv_window_;
  local_index_ = other.local_index_;
  remote_index_ = other.remote_index_;
  handshake_hash_ = other.handshake_hash_;
  established_at_ = other.established_at_;
  limits_ = other.limits_;
  return *this;
}

TransportFrame TransportSession::seal(std::span<const uint8_t> plaintext,
                                      SimTime now) {
  if (now - established_at_ >= limits_.expire_after)
    throw SessionExpired("session exceeded its time limit");
  if (messages_sealed_.load() >= limits_.reject_after_messages)
    throw SessionExpired("session exceeded its message limit");
  TransportFrame f;
  f.receiver_index = remote_index_;
  f.counter = send_counter_.fetch_add(1);
  f.ciphertext.resize(plaintext.size() + crypto::kAeadTagSize);
  crypto::aead_seal(send_key_, f.counter, {}, plaintext, f.ciphertext.data());
  messages_sealed_.fetch_add(1);
  return f;
}

Bytes TransportSession::open(const TransportFrame& frame, SimTime now) {
  if (frame.receiver_index != local_index_) throw IndexMismatch();
  if (now - established_at_ >= limits_.expire_after)
    throw SessionExpired("session exceeded its time limit");
  if (!recv_window_.check(frame.counter))
    throw ReplayError("counter " + std::to_string(frame.counter) +
                      " already used or older than window");
  if (frame.ciphertext.size() < crypto::kAeadTagSize)
    throw MalformedFrame("ciphertext shorter than tag");
  Bytes plaintext(frame.ciphertext.size() - crypto::kAeadTagSize);
  if (!crypto::aead_open(recv_key_, frame.counter, {}, frame.ciphertext,
                         plaintext.data()))
    throw AuthenticationError();
  recv_window_.update(frame.counter);
  return plaintext;
}

RekeyStatus TransportSession::rekey_status(SimTime now) const {
  SimTime age = now - established_at_;
  if (age >= limits_.expire_after) return RekeyStatus::expired;
  if (age >= limits_.rekey_after ||
      messages_sealed_.load() >= limits_.rekey_after_messages)
    return RekeyStatus::rekey_recommended;
  return RekeyStatus::fresh;
}

}  // namespace sliceguard::tunnel
