#pragma once

#include "sliceguard/bytes.hpp"

namespace sliceguard::crypto {

// Clamp a 32-byte scalar in place: clear bits 0..2 and 255, set bit 254.
void x25519_clamp(Key32& scalar);

// X25519 scalar multiplication (RFC 7748). The scalar is clamped internally.
Key32 x25519(const Key32& scalar, const Key32& point);

// Scalar multiplication with the base point 9.
Key32 x25519_base(const Key32& scalar);

}  // namespace sliceguard::crypto
