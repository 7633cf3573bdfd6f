#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metascope/errors.hpp"

namespace metascope {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

std::string to_hex(ByteSpan data);
std::optional<Bytes> try_from_hex(std::string_view hex);

/// Strict decode; throws InvalidArgument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// Cursor over an immutable byte buffer. All reads throw TruncatedInput when
/// fewer bytes remain than requested.
class ByteReader {
public:
    explicit ByteReader(ByteSpan data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16le();
    std::uint32_t u32le();
    std::uint64_t u64le();

    /// Compact integer: <0xfd literal; 0xfd u16le; 0xfe u32le; 0xff u64le.
    /// Rejects non-canonical encodings (value representable in a shorter form).
    std::uint64_t varint();

    Bytes take(std::size_t n);
    std::uint8_t peek() const;

    std::size_t remaining() const { return data_.size() - pos_; }
    std::size_t position() const { return pos_; }
    bool empty() const { return pos_ == data_.size(); }

private:
    void require(std::size_t n) const;

    ByteSpan data_;
    std::size_t pos_ = 0;
};

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16le(std::uint16_t v);
    void u32le(std::uint32_t v);
    void u64le(std::uint64_t v);
    void varint(std::uint64_t v);
    void raw(ByteSpan data) { out_.insert(out_.end(), data.begin(), data.end()); }

    const Bytes& bytes() const { return out_; }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

}  // namespace metascope
