#include "metascope/ec.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <memory>

#include "metascope/errors.hpp"
#include "metascope/hash.hpp"

namespace metascope::stealth {

namespace {

struct BnDeleter {
    void operator()(BIGNUM* bn) const { BN_free(bn); }
};
struct BnCtxDeleter {
    void operator()(BN_CTX* ctx) const { BN_CTX_free(ctx); }
};
struct PointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

/// Shared read-only secp256k1 group. OpenSSL named groups are immutable, so
/// concurrent use from multiple threads is fine.
const EC_GROUP* group() {
    static const EC_GROUP* g = [] {
        EC_GROUP* created = EC_GROUP_new_by_curve_name(NID_secp256k1);
        if (!created) throw Error("secp256k1 group unavailable");
        return created;
    }();
    return g;
}

BnCtxPtr make_ctx() {
    BnCtxPtr ctx(BN_CTX_new());
    if (!ctx) throw Error("BN_CTX_new failed");
    return ctx;
}

BnPtr to_bn(ByteSpan be) {
    BnPtr bn(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
    if (!bn) throw Error("BN_bin2bn failed");
    return bn;
}

std::array<std::uint8_t, 32> to_be32(const BIGNUM* bn) {
    std::array<std::uint8_t, 32> out{};
    if (BN_bn2binpad(bn, out.data(), static_cast<int>(out.size())) < 0) {
        throw Error("BN_bn2binpad failed");
    }
    return out;
}

PointPtr parse_point(ByteSpan compressed) {
    if (compressed.size() != CurvePoint::kCompressedSize) {
        throw InvalidPoint("compressed point must be 33 bytes");
    }
    auto ctx = make_ctx();
    PointPtr pt(EC_POINT_new(group()));
    if (!pt) throw Error("EC_POINT_new failed");
    if (EC_POINT_oct2point(group(), pt.get(), compressed.data(), compressed.size(), ctx.get()) !=
        1) {
        throw InvalidPoint("bytes do not decode to a curve point");
    }
    if (EC_POINT_is_at_infinity(group(), pt.get())) {
        throw InvalidPoint("point at infinity is not a valid public key");
    }
    return pt;
}

std::array<std::uint8_t, 33> serialize_point(const EC_POINT* pt) {
    auto ctx = make_ctx();
    if (EC_POINT_is_at_infinity(group(), pt)) {
        throw InvalidPoint("operation produced the point at infinity");
    }
    std::array<std::uint8_t, 33> out{};
    if (EC_POINT_point2oct(group(), pt, POINT_CONVERSION_COMPRESSED, out.data(), out.size(),
                           ctx.get()) != out.size()) {
        throw Error("EC_POINT_point2oct failed");
    }
    return out;
}

CurvePoint from_ec_point(const EC_POINT* pt) {
    return CurvePoint::from_compressed(serialize_point(pt));
}

}  // namespace

std::optional<Scalar> Scalar::try_from_bytes(ByteSpan be32) {
    if (be32.size() != kSize) return std::nullopt;
    auto bn = to_bn(be32);
    if (BN_is_zero(bn.get())) return std::nullopt;
    if (BN_cmp(bn.get(), EC_GROUP_get0_order(group())) >= 0) return std::nullopt;
    Scalar s;
    std::copy(be32.begin(), be32.end(), s.be_.begin());
    return s;
}

Scalar Scalar::from_bytes(ByteSpan be32) {
    auto s = try_from_bytes(be32);
    if (!s) throw InvalidArgument("scalar must be 32 bytes in [1, group order)");
    return *s;
}

Scalar Scalar::from_hex(std::string_view hex) { return from_bytes(metascope::from_hex(hex)); }

Scalar Scalar::from_uint(std::uint64_t value) {
    std::array<std::uint8_t, kSize> be{};
    for (int i = 0; i < 8; ++i) {
        be[kSize - 1 - static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>((value >> (8 * i)) & 0xff);
    }
    return from_bytes(be);
}

Scalar Scalar::add(const Scalar& other) const {
    auto ctx = make_ctx();
    auto a = to_bn(be_);
    auto b = to_bn(other.be_);
    BnPtr sum(BN_new());
    if (!sum) throw Error("BN_new failed");
    if (BN_mod_add(sum.get(), a.get(), b.get(), EC_GROUP_get0_order(group()), ctx.get()) != 1) {
        throw Error("BN_mod_add failed");
    }
    if (BN_is_zero(sum.get())) throw ZeroResult("scalar sum is zero mod group order");
    Scalar s;
    s.be_ = to_be32(sum.get());
    return s;
}

std::string Scalar::hex() const { return to_hex(be_); }

CurvePoint CurvePoint::generator() {
    const EC_POINT* g = EC_GROUP_get0_generator(group());
    return from_ec_point(g);
}

CurvePoint CurvePoint::from_compressed(ByteSpan bytes) {
    auto pt = parse_point(bytes);  // validates
    CurvePoint p;
    std::copy(bytes.begin(), bytes.end(), p.bytes_.begin());
    return p;
}

std::optional<CurvePoint> CurvePoint::try_from_compressed(ByteSpan bytes) {
    try {
        return from_compressed(bytes);
    } catch (const InvalidPoint&) {
        return std::nullopt;
    }
}

CurvePoint CurvePoint::from_hex(std::string_view hex) {
    return from_compressed(metascope::from_hex(hex));
}

CurvePoint CurvePoint::base_mul(const Scalar& k) {
    auto ctx = make_ctx();
    auto bn = to_bn(k.bytes());
    PointPtr result(EC_POINT_new(group()));
    if (!result) throw Error("EC_POINT_new failed");
    if (EC_POINT_mul(group(), result.get(), bn.get(), nullptr, nullptr, ctx.get()) != 1) {
        throw Error("EC_POINT_mul failed");
    }
    return from_ec_point(result.get());
}

CurvePoint CurvePoint::mul(const Scalar& k) const {
    auto ctx = make_ctx();
    auto pt = parse_point(bytes_);
    auto bn = to_bn(k.bytes());
    PointPtr result(EC_POINT_new(group()));
    if (!result) throw Error("EC_POINT_new failed");
    if (EC_POINT_mul(group(), result.get(), nullptr, pt.get(), bn.get(), ctx.get()) != 1) {
        throw Error("EC_POINT_mul failed");
    }
    return from_ec_point(result.get());
}

CurvePoint CurvePoint::add(const CurvePoint& other) const {
    auto ctx = make_ctx();
    auto a = parse_point(bytes_);
    auto b = parse_point(other.bytes_);
    PointPtr result(EC_POINT_new(group()));
    if (!result) throw Error("EC_POINT_new failed");
    if (EC_POINT_add(group(), result.get(), a.get(), b.get(), ctx.get()) != 1) {
        throw Error("EC_POINT_add failed");
    }
    return from_ec_point(result.get());
}

CurvePoint CurvePoint::negate() const {
    auto ctx = make_ctx();
    auto pt = parse_point(bytes_);
    if (EC_POINT_invert(group(), pt.get(), ctx.get()) != 1) {
        throw Error("EC_POINT_invert failed");
    }
    return from_ec_point(pt.get());
}

std::array<std::uint8_t, 65> CurvePoint::uncompressed() const {
    auto ctx = make_ctx();
    auto pt = parse_point(bytes_);
    std::array<std::uint8_t, 65> out{};
    if (EC_POINT_point2oct(group(), pt.get(), POINT_CONVERSION_UNCOMPRESSED, out.data(),
                           out.size(), ctx.get()) != out.size()) {
        throw Error("EC_POINT_point2oct failed");
    }
    return out;
}

std::string CurvePoint::hex() const { return to_hex(bytes_); }

Scalar hash_point_to_scalar(const CurvePoint& point) {
    Hash256 digest = sha256(point.compressed());
    auto ctx = make_ctx();
    auto bn = to_bn(digest);
    BnPtr reduced(BN_new());
    if (!reduced) throw Error("BN_new failed");
    if (BN_nnmod(reduced.get(), bn.get(), EC_GROUP_get0_order(group()), ctx.get()) != 1) {
        throw Error("BN_nnmod failed");
    }
    if (BN_is_zero(reduced.get())) {
        throw DegenerateHash("point hash reduces to zero mod group order");
    }
    std::array<std::uint8_t, 32> be{};
    if (BN_bn2binpad(reduced.get(), be.data(), static_cast<int>(be.size())) < 0) {
        throw Error("BN_bn2binpad failed");
    }
    return Scalar::from_bytes(be);
}

}  // namespace metascope::stealth
