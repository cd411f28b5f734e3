#pragma once

#include <span>

#include "sliceguard/bytes.hpp"

namespace sliceguard::crypto {

// ChaCha20 stream cipher (RFC 8439), 96-bit nonce / 32-bit block counter.
void chacha20_xor(const Key32& key, uint32_t counter, const uint8_t nonce[12],
                  std::span<const uint8_t> in, uint8_t* out);

// Poly1305 one-time authenticator.
void poly1305(const uint8_t key[32], std::span<const uint8_t> msg, uint8_t tag[16]);

// ChaCha20-Poly1305 AEAD (RFC 8439). The nonce is 4 zero bytes followed by
// the 64-bit little-endian counter, matching the transport nonce layout.
constexpr size_t kAeadTagSize = 16;

// out must hold plaintext.size() + kAeadTagSize bytes.
void aead_seal(const Key32& key, uint64_t nonce_counter,
               std::span<const uint8_t> aad, std::span<const uint8_t> plaintext,
               uint8_t* out);

// ciphertext includes the trailing tag; out must hold ciphertext.size() - 16
// bytes. Returns false on tag mismatch (out is untouched in that case).
bool aead_open(const Key32& key, uint64_t nonce_counter,
               std::span<const uint8_t> aad, std::span<const uint8_t> ciphertext,
               uint8_t* out);

}  // namespace sliceguard::crypto
