#include "metascope/hash.hpp"

#include <openssl/evp.h>

#include "metascope/errors.hpp"

namespace metascope {

Hash256 sha256(ByteSpan data) {
    Hash256 out{};
    unsigned int len = 0;
    static const std::uint8_t empty = 0;
    const std::uint8_t* ptr = data.empty() ? &empty : data.data();
    if (EVP_Digest(ptr, data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw Error("sha256 failed");
    }
    return out;
}

Hash256 sha256d(ByteSpan data) {
    Hash256 first = sha256(data);
    return sha256(first);
}

Hash160 hash160(ByteSpan data) {
    Hash256 inner = sha256(data);
    return ripemd160(inner);
}

}  // namespace metascope
