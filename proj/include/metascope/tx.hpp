#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "metascope/bytes.hpp"
#include "metascope/script.hpp"

namespace metascope {

/// Transaction identifier. Stored in wire order (as it appears inside input
/// outpoints); rendered byte-reversed, which is the order explorers display.
struct Txid {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const;
    static Txid from_hex(std::string_view display_hex);

    auto operator<=>(const Txid&) const = default;
};

struct TxInput {
    Txid prev_txid;
    std::uint32_t prev_index = 0;
    Script unlocking_script;
    std::uint32_t sequence = 0xffffffff;

    bool operator==(const TxInput&) const = default;
};

struct TxOutput {
    std::uint64_t value = 0;
    Script locking_script;

    bool operator==(const TxOutput&) const = default;
};

struct Transaction {
    std::int32_t version = 1;
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    std::uint32_t locktime = 0;

    /// Double SHA-256 of the wire bytes.
    Txid txid() const;

    bool operator==(const Transaction&) const = default;
};

/// Throws MalformedTransaction on truncation, counts overrunning the buffer,
/// non-canonical length encodings, or trailing bytes. Extended (witness)
/// serialization raises WitnessUnsupported.
Transaction parse_transaction(ByteSpan bytes);

Bytes serialize_transaction(const Transaction& tx);

}  // namespace metascope
