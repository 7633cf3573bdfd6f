#include "metascope/bytes.hpp"

#include <cstring>

namespace metascope {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteSpan data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::optional<Bytes> try_from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    auto out = try_from_hex(hex);
    if (!out) throw InvalidArgument("invalid hex string");
    return std::move(*out);
}

void ByteReader::require(std::size_t n) const {
    if (remaining() < n) throw TruncatedInput("input ends mid-field");
}

std::uint8_t ByteReader::u8() {
    require(1);
    return data_[pos_++];
}

std::uint8_t ByteReader::peek() const {
    require(1);
    return data_[pos_];
}

std::uint16_t ByteReader::u16le() {
    require(2);
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_]) |
                      static_cast<std::uint16_t>(data_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
}

std::uint32_t ByteReader::u32le() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | data_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::u64le() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | data_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 8;
    return v;
}

std::uint64_t ByteReader::varint() {
    std::uint8_t tag = u8();
    if (tag < 0xfd) return tag;
    if (tag == 0xfd) {
        std::uint64_t v = u16le();
        if (v < 0xfd) throw NonCanonicalEncoding("non-canonical compact integer");
        return v;
    }
    if (tag == 0xfe) {
        std::uint64_t v = u32le();
        if (v <= 0xffff) throw NonCanonicalEncoding("non-canonical compact integer");
        return v;
    }
    std::uint64_t v = u64le();
    if (v <= 0xffffffffULL) throw NonCanonicalEncoding("non-canonical compact integer");
    return v;
}

Bytes ByteReader::take(std::size_t n) {
    require(n);
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
}

void ByteWriter::u16le(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v & 0xff));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u32le(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void ByteWriter::u64le(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void ByteWriter::varint(std::uint64_t v) {
    if (v < 0xfd) {
        u8(static_cast<std::uint8_t>(v));
    } else if (v <= 0xffff) {
        u8(0xfd);
        u16le(static_cast<std::uint16_t>(v));
    } else if (v <= 0xffffffffULL) {
        u8(0xfe);
        u32le(static_cast<std::uint32_t>(v));
    } else {
        u8(0xff);
        u64le(v);
    }
}

}  // namespace metascope
