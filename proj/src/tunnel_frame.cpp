#include "sliceguard/tunnel/frame.hpp"

#include "sliceguard/tunnel/errors.hpp"

namespace sliceguard::tunnel {

namespace {
void put_header(Bytes& out, FrameType t) {
  out.push_back(uint8_t(t));
  out.insert(out.end(), 3, 0);
}

void check_header(std::span<const uint8_t> wire, FrameType want, size_t exact_size) {
  if (wire.size() < 4) throw MalformedFrame("frame shorter than header");
  if (wire[0] != uint8_t(want)) throw MalformedFrame("unexpected frame type byte");
  if (wire[1] != 0 || wire[2] != 0 || wire[3] != 0)
    throw MalformedFrame("nonzero reserved bytes");
  if (exact_size != 0 && wire.size() != exact_size)
    throw MalformedFrame("bad frame length");
}
}  // namespace

Bytes encode(const InitiationFrame& f) {
  Bytes out;
  out.reserve(kInitiationFrameSize);
  put_header(out, FrameType::initiation);
  uint8_t idx[4];
  store_le32(idx, f.sender_index);
  out.insert(out.end(), idx, idx + 4);
  out.insert(out.end(), f.ephemeral.begin(), f.ephemeral.end());
  out.insert(out.end(), f.enc_static.begin(), f.enc_static.end());
  out.insert(out.end(), f.enc_timestamp.begin(), f.enc_timestamp.end());
  return out;
}

Bytes encode(const ResponseFrame& f) {
  Bytes out;
  out.reserve(kResponseFrameSize);
  put_header(out, FrameType::response);
  uint8_t idx[8];
  store_le32(idx, f.sender_index);
  store_le32(idx + 4, f.receiver_index);
  out.insert(out.end(), idx, idx + 8);
  out.insert(out.end(), f.ephemeral.begin(), f.ephemeral.end());
  out.insert(out.end(), f.enc_empty.begin(), f.enc_empty.end());
  return out;
}

Bytes encode(const TransportFrame& f) {
  Bytes out;
  out.reserve(kTransportHeaderSize + f.ciphertext.size());
  put_header(out, FrameType::transport);
  uint8_t hdr[12];
  store_le32(hdr, f.receiver_index);
  store_le64(hdr + 4, f.counter);
  out.insert(out.end(), hdr, hdr + 12);
  out.insert(out.end(), f.ciphertext.begin(), f.ciphertext.end());
  return out;
}

FrameType frame_type(std::span<const uint8_t> wire) {
  if (wire.empty()) throw MalformedFrame("empty frame");
  switch (wire[0]) {
    case 1: return FrameType::initiation;
    case 2: return FrameType::response;
    case 4: return FrameType::transport;
    default: throw MalformedFrame("unknown frame type byte");
  }
}

InitiationFrame decode_initiation(std::span<const uint8_t> wire) {
  check_header(wire, FrameType::initiation, kInitiationFrameSize);
  InitiationFrame f;
  f.sender_index = load_le32(wire.data() + 4);
  std::memcpy(f.ephemeral.data(), wire.data() + 8, 32);
  std::memcpy(f.enc_static.data(), wire.data() + 40, 48);
  std::memcpy(f.enc_timestamp.data(), wire.data() + 88, 28);
  return f;
}

ResponseFrame decode_response(std::span<const uint8_t> wire) {
  check_header(wire, FrameType::response, kResponseFrameSize);
  ResponseFrame f;
  f.sender_index = load_le32(wire.data() + 4);
  f.receiver_index = load_le32(wire.data() + 8);
  std::memcpy(f.ephemeral.data(), wire.data() + 12, 32);
  std::memcpy(f.enc_empty.data(), wire.data() + 44, 16);
  return f;
}

TransportFrame decode_transport(std::span<const uint8_t> wire) {
  check_header(wire, FrameType::transport, 0);
  if (wire.size() < kTransportHeaderSize + 16)
    throw MalformedFrame("transport frame shorter than header + tag");
  TransportFrame f;
  f.receiver_index = load_le32(wire.data() + 4);
  f.counter = load_le64(wire.data() + 8);
  f.ciphertext.assign(wire.begin() + kTransportHeaderSize, wire.end());
  return f;
}

}  // namespace sliceguard::tunnel
