#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metascope/bytes.hpp"

namespace metascope {

namespace opcode {
constexpr std::uint8_t OP_0 = 0x00;
constexpr std::uint8_t OP_PUSHDATA1 = 0x4c;
constexpr std::uint8_t OP_PUSHDATA2 = 0x4d;
constexpr std::uint8_t OP_1 = 0x51;
constexpr std::uint8_t OP_16 = 0x60;
constexpr std::uint8_t OP_RETURN = 0x6a;
constexpr std::uint8_t OP_DUP = 0x76;
constexpr std::uint8_t OP_EQUAL = 0x87;
constexpr std::uint8_t OP_EQUALVERIFY = 0x88;
constexpr std::uint8_t OP_HASH160 = 0xa9;
constexpr std::uint8_t OP_CHECKSIG = 0xac;
constexpr std::uint8_t OP_CHECKMULTISIG = 0xae;
}  // namespace opcode

/// One decoded script operation. For push operations `data` holds the pushed
/// bytes and `op` the original opcode byte (0x01..0x4b direct push, OP_0,
/// OP_PUSHDATA1/2), so re-encoding reproduces the source bytes exactly.
struct ScriptOp {
    std::uint8_t op = 0;
    Bytes data;

    bool is_push() const {
        return op <= 0x4b || op == opcode::OP_PUSHDATA1 || op == opcode::OP_PUSHDATA2;
    }
    bool operator==(const ScriptOp&) const = default;
};

/// Raw script bytes plus the decoded op sequence. Scripts embedded in
/// transactions may be undecodable (a push overruns the script); they are kept
/// with `decodable == false` and an empty op list so the transaction itself
/// still round-trips byte-exactly.
struct Script {
    Bytes raw;
    std::vector<ScriptOp> ops;
    bool decodable = true;

    /// Never throws; marks the script undecodable instead.
    static Script from_raw(Bytes raw);

    bool operator==(const Script& other) const { return raw == other.raw; }
};

/// Strict decode; throws MalformedScript when a push overruns the input.
Script parse_script(ByteSpan bytes);

Bytes encode_ops(std::span<const ScriptOp> ops);

enum class ScriptType { P2PK, P2PKH, P2SH, Multisig, NullData, NonStandard };

const char* to_string(ScriptType type);

/// Pure function of the locking-script bytes. NullData wins on the first byte
/// alone (0x6a) even when the remainder of the script does not decode.
ScriptType classify_script_type(const Script& script);

}  // namespace metascope
