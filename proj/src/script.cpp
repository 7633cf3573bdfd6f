#include "metascope/script.hpp"

namespace metascope {

namespace {

/// Decodes ops from raw bytes; throws MalformedScript on a push overrun.
std::vector<ScriptOp> decode_ops(ByteSpan raw) {
    std::vector<ScriptOp> ops;
    std::size_t i = 0;
    while (i < raw.size()) {
        std::uint8_t op = raw[i++];
        std::size_t len = 0;
        if (op >= 0x01 && op <= 0x4b) {
            len = op;
        } else if (op == opcode::OP_PUSHDATA1) {
            if (i + 1 > raw.size()) throw MalformedScript("pushdata1 missing length byte");
            len = raw[i++];
        } else if (op == opcode::OP_PUSHDATA2) {
            if (i + 2 > raw.size()) throw MalformedScript("pushdata2 missing length bytes");
            len = static_cast<std::size_t>(raw[i]) | static_cast<std::size_t>(raw[i + 1]) << 8;
            i += 2;
        } else {
            // OP_0 pushes empty data; everything else (known or not) is an
            // opaque single-byte op. This is an analyzer, not a validator.
            ops.push_back({op, {}});
            continue;
        }
        if (i + len > raw.size()) throw MalformedScript("push length overruns script");
        ops.push_back({op, Bytes(raw.begin() + static_cast<std::ptrdiff_t>(i),
                                 raw.begin() + static_cast<std::ptrdiff_t>(i + len))});
        i += len;
    }
    return ops;
}

bool is_small_int(std::uint8_t op) { return op >= opcode::OP_1 && op <= opcode::OP_16; }

bool is_key_push(const ScriptOp& op) {
    return op.is_push() && (op.data.size() == 33 || op.data.size() == 65);
}

}  // namespace

Script Script::from_raw(Bytes raw) {
    Script s;
    s.raw = std::move(raw);
    try {
        s.ops = decode_ops(s.raw);
    } catch (const MalformedScript&) {
        s.ops.clear();
        s.decodable = false;
    }
    return s;
}

Script parse_script(ByteSpan bytes) {
    Script s;
    s.raw.assign(bytes.begin(), bytes.end());
    s.ops = decode_ops(s.raw);
    return s;
}

Bytes encode_ops(std::span<const ScriptOp> ops) {
    Bytes out;
    for (const ScriptOp& op : ops) {
        out.push_back(op.op);
        if (op.op >= 0x01 && op.op <= 0x4b) {
            out.insert(out.end(), op.data.begin(), op.data.end());
        } else if (op.op == opcode::OP_PUSHDATA1) {
            out.push_back(static_cast<std::uint8_t>(op.data.size()));
            out.insert(out.end(), op.data.begin(), op.data.end());
        } else if (op.op == opcode::OP_PUSHDATA2) {
            out.push_back(static_cast<std::uint8_t>(op.data.size() & 0xff));
            out.push_back(static_cast<std::uint8_t>((op.data.size() >> 8) & 0xff));
            out.insert(out.end(), op.data.begin(), op.data.end());
        }
    }
    return out;
}

const char* to_string(ScriptType type) {
    switch (type) {
        case ScriptType::P2PK: return "p2pk";
        case ScriptType::P2PKH: return "p2pkh";
        case ScriptType::P2SH: return "p2sh";
        case ScriptType::Multisig: return "multisig";
        case ScriptType::NullData: return "nulldata";
        case ScriptType::NonStandard: return "nonstandard";
    }
    return "nonstandard";
}

ScriptType classify_script_type(const Script& script) {
    if (script.raw.empty()) return ScriptType::NonStandard;
    if (script.raw[0] == opcode::OP_RETURN) return ScriptType::NullData;
    if (!script.decodable) return ScriptType::NonStandard;

    const auto& ops = script.ops;

    // DUP HASH160 PUSH(20) EQUALVERIFY CHECKSIG
    if (ops.size() == 5 && ops[0].op == opcode::OP_DUP && ops[1].op == opcode::OP_HASH160 &&
        ops[2].is_push() && ops[2].data.size() == 20 && ops[3].op == opcode::OP_EQUALVERIFY &&
        ops[4].op == opcode::OP_CHECKSIG) {
        return ScriptType::P2PKH;
    }

    // HASH160 PUSH(20) EQUAL
    if (ops.size() == 3 && ops[0].op == opcode::OP_HASH160 && ops[1].is_push() &&
        ops[1].data.size() == 20 && ops[2].op == opcode::OP_EQUAL) {
        return ScriptType::P2SH;
    }

    // PUSH(33|65) CHECKSIG
    if (ops.size() == 2 && is_key_push(ops[0]) && ops[1].op == opcode::OP_CHECKSIG) {
        return ScriptType::P2PK;
    }

    // OP_k PUSH(key)... OP_n CHECKMULTISIG
    if (ops.size() >= 4 && is_small_int(ops.front().op) &&
        ops.back().op == opcode::OP_CHECKMULTISIG && is_small_int(ops[ops.size() - 2].op)) {
        int k = ops.front().op - opcode::OP_1 + 1;
        int n = ops[ops.size() - 2].op - opcode::OP_1 + 1;
        std::size_t keys = ops.size() - 3;
        bool all_keys = true;
        for (std::size_t i = 1; i + 2 < ops.size(); ++i) {
            if (!is_key_push(ops[i])) all_keys = false;
        }
        if (all_keys && k <= n && keys == static_cast<std::size_t>(n)) {
            return ScriptType::Multisig;
        }
    }

    return ScriptType::NonStandard;
}

}  // namespace metascope
