#pragma once

#include <variant>

#include "sliceguard/bytes.hpp"

namespace sliceguard::tunnel {

// Wire layout, all integers little-endian:
//   type 1  initiation: type(1) reserved(3) sender_index(4) ephemeral(32)
//                        enc_static(32+16) enc_timestamp(12+16)   = 116 bytes
//   type 2  response:    type(1) reserved(3) sender_index(4) receiver_index(4)
//                        ephemeral(32) enc_empty(16)              = 60 bytes
//   type 4  transport:   type(1) reserved(3) receiver_index(4) counter(8)
//                        ciphertext(n+16)                         = n + 32 bytes
enum class FrameType : uint8_t {
  initiation = 1,
  response = 2,
  transport = 4,
};

constexpr size_t kInitiationFrameSize = 4 + 4 + 32 + 48 + 28;  // 116
constexpr size_t kResponseFrameSize = 4 + 4 + 4 + 32 + 16;     // 60
constexpr size_t kTransportHeaderSize = 16;
constexpr size_t kTransportOverhead = 32;  // header + AEAD tag

struct InitiationFrame {
  uint32_t sender_index = 0;
  Key32 ephemeral{};
  std::array<uint8_t, 48> enc_static{};
  std::array<uint8_t, 28> enc_timestamp{};
};

struct ResponseFrame {
  uint32_t sender_index = 0;
  uint32_t receiver_index = 0;
  Key32 ephemeral{};
  std::array<uint8_t, 16> enc_empty{};
};

struct TransportFrame {
  uint32_t receiver_index = 0;
  uint64_t counter = 0;
  Bytes ciphertext;  // includes the 16-byte tag
};

Bytes encode(const InitiationFrame& f);
Bytes encode(const ResponseFrame& f);
Bytes encode(const TransportFrame& f);

// Peeks at the type byte; throws MalformedFrame for anything unparsable.
FrameType frame_type(std::span<const uint8_t> wire);
InitiationFrame decode_initiation(std::span<const uint8_t> wire);
ResponseFrame decode_response(std::span<const uint8_t> wire);
TransportFrame decode_transport(std::span<const uint8_t> wire);

}  // namespace sliceguard::tunnel
