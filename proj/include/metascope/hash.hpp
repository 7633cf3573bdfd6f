#pragma once

#include <array>
#include <cstdint>

#include "metascope/bytes.hpp"

namespace metascope {

using Hash256 = std::array<std::uint8_t, 32>;
using Hash160 = std::array<std::uint8_t, 20>;

Hash256 sha256(ByteSpan data);

/// SHA-256 applied twice; the network's transaction/block digest.
Hash256 sha256d(ByteSpan data);

Hash160 ripemd160(ByteSpan data);

/// RIPEMD-160 over SHA-256; the network's public-key hash.
Hash160 hash160(ByteSpan data);

}  // namespace metascope
