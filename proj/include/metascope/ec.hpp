#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "metascope/bytes.hpp"

namespace metascope::stealth {

/// Nonzero integer modulo the secp256k1 group order, stored as 32 canonical
/// big-endian bytes. Houses private keys and hash-derived tweaks alike.
class Scalar {
public:
    static constexpr std::size_t kSize = 32;

    /// nullopt when the value is zero or >= the group order.
    static std::optional<Scalar> try_from_bytes(ByteSpan be32);

    /// Throws InvalidArgument on out-of-range input.
    static Scalar from_bytes(ByteSpan be32);
    static Scalar from_hex(std::string_view hex);

    /// Small test/demo constants (1, 2, ...). Throws InvalidArgument on 0.
    static Scalar from_uint(std::uint64_t value);

    /// Sum modulo the group order; throws ZeroResult when the sum is zero.
    Scalar add(const Scalar& other) const;

    const std::array<std::uint8_t, kSize>& bytes() const { return be_; }
    std::string hex() const;

    bool operator==(const Scalar&) const = default;

private:
    Scalar() = default;
    std::array<std::uint8_t, kSize> be_{};
};

/// Point on secp256k1 in 33-byte compressed encoding. The identity is never
/// representable: construction and every group operation reject it.
class CurvePoint {
public:
    static constexpr std::size_t kCompressedSize = 33;

    static CurvePoint generator();

    /// Throws InvalidPoint unless the bytes decode to a curve point.
    static CurvePoint from_compressed(ByteSpan bytes);
    static std::optional<CurvePoint> try_from_compressed(ByteSpan bytes);
    static CurvePoint from_hex(std::string_view hex);

    /// k*G via the generator table.
    static CurvePoint base_mul(const Scalar& k);

    CurvePoint mul(const Scalar& k) const;
    CurvePoint add(const CurvePoint& other) const;
    CurvePoint negate() const;

    const std::array<std::uint8_t, kCompressedSize>& compressed() const { return bytes_; }
    std::array<std::uint8_t, 65> uncompressed() const;
    std::string hex() const;

    bool operator==(const CurvePoint&) const = default;

private:
    CurvePoint() = default;
    std::array<std::uint8_t, kCompressedSize> bytes_{};
};

/// SHA-256 of the compressed point, reduced modulo the group order.
/// Throws DegenerateHash on the (astronomically unlikely) zero residue.
Scalar hash_point_to_scalar(const CurvePoint& point);

}  // namespace metascope::stealth
