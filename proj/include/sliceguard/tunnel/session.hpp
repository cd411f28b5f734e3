#pragma once

#include <atomic>

#include "sliceguard/bytes.hpp"
#include "sliceguard/tunnel/frame.hpp"

namespace sliceguard::tunnel {

// Simulation time is integer nanoseconds throughout the library.
using SimTime = int64_t;
constexpr SimTime kMillisecond = 1'000'000;
constexpr SimTime kSecond = 1'000'000'000;

struct SessionLimits {
  SimTime rekey_after = 120 * kSecond;
  SimTime expire_after = 180 * kSecond;
  uint64_t rekey_after_messages = uint64_t(1) << 48;
  uint64_t reject_after_messages = uint64_t(1) << 60;
};

enum class RekeyStatus { fresh, rekey_recommended, expired };

enum class Role { initiator, responder };

// Sliding acceptance window over transport counters: the 2048 counters at
// and below the high-water mark stay checkable, anything older is rejected.
class ReplayWindow {
 public:
  static constexpr uint64_t kSize = 2048;

  // Would `counter` be accepted right now? Does not mutate.
  bool check(uint64_t counter) const;
  // Mark accepted (call after the frame authenticated).
  void update(uint64_t counter);

 private:
  static constexpr size_t kWords = kSize / 64;
  uint64_t highest_ = 0;
  bool any_ = false;
  std::array<uint64_t, kWords> bitmap_{};
};

class TransportSession {
 public:
  TransportSession() = default;
  TransportSession(Role role, const Key32& send_key, const Key32& recv_key,
                   uint32_t local_index, uint32_t remote_index,
                   const Key32& handshake_hash, SimTime established_at,
                   SessionLimits limits = {});

  // Copyable so tests and taps can run non-destructive decode on a clone.
  TransportSession(const TransportSession& other);
  TransportSession& operator=(const TransportSession& other);

  TransportFrame seal(std::span<const uint8_t> plaintext, SimTime now);
  Bytes open(const TransportFrame& frame, SimTime now);

  RekeyStatus rekey_status(SimTime now) const;

  Role role() const { return role_; }
  uint32_t local_index() const { return local_index_; }
  uint32_t remote_index() const { return remote_index_; }
  SimTime established_at() const { return established_at_; }
  uint64_t messages_sealed() const { return messages_sealed_.load(); }
  const Key32& handshake_hash() const { return handshake_hash_; }
  const Key32& send_key() const { return send_key_; }
  const Key32& recv_key() const { return recv_key_; }

 private:
  Role role_ = Role::initiator;
  Key32 send_key_{};
  Key32 recv_key_{};
  std::atomic<uint64_t> send_counter_{0};
  std::atomic<uint64_t> messages_sealed_{0};
  ReplayWindow recv_window_;
  uint32_t local_index_ = 0;
  uint32_t remote_index_ = 0;
  Key32 handshake_hash_{};
  SimTime established_at_ = 0;
  SessionLimits limits_;
};

}  // namespace sliceguard::tunnel
