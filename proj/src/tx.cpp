#include "metascope/tx.hpp"

#include <algorithm>

#include "metascope/hash.hpp"

namespace metascope {

namespace {

// Smallest possible wire sizes, used to reject absurd count fields before
// any allocation happens.
constexpr std::uint64_t kMinInputWire = 32 + 4 + 1 + 4;
constexpr std::uint64_t kMinOutputWire = 8 + 1;

Script read_script(ByteReader& r) {
    std::uint64_t len = r.varint();
    if (len > r.remaining()) throw TruncatedInput("script length overruns transaction");
    return Script::from_raw(r.take(static_cast<std::size_t>(len)));
}

Transaction parse_impl(ByteSpan bytes) {
    ByteReader r(bytes);
    Transaction tx;
    tx.version = static_cast<std::int32_t>(r.u32le());

    std::uint64_t in_count = r.varint();
    if (in_count == 0 && r.remaining() > 0 && r.peek() == 0x01) {
        throw WitnessUnsupported("extended (witness) serialization not supported");
    }
    if (in_count > r.remaining() / kMinInputWire) {
        throw TruncatedInput("input count exceeds remaining bytes");
    }
    tx.inputs.reserve(static_cast<std::size_t>(in_count));
    for (std::uint64_t i = 0; i < in_count; ++i) {
        TxInput input;
        Bytes id = r.take(32);
        std::copy(id.begin(), id.end(), input.prev_txid.bytes.begin());
        input.prev_index = r.u32le();
        input.unlocking_script = read_script(r);
        input.sequence = r.u32le();
        tx.inputs.push_back(std::move(input));
    }

    std::uint64_t out_count = r.varint();
    if (out_count > r.remaining() / kMinOutputWire) {
        throw TruncatedInput("output count exceeds remaining bytes");
    }
    tx.outputs.reserve(static_cast<std::size_t>(out_count));
    for (std::uint64_t i = 0; i < out_count; ++i) {
        TxOutput output;
        output.value = r.u64le();
        output.locking_script = read_script(r);
        tx.outputs.push_back(std::move(output));
    }

    tx.locktime = r.u32le();
    if (!r.empty()) throw TruncatedInput("trailing bytes after transaction");
    return tx;
}

}  // namespace

std::string Txid::hex() const {
    Bytes reversed(bytes.rbegin(), bytes.rend());
    return to_hex(reversed);
}

Txid Txid::from_hex(std::string_view display_hex) {
    Bytes raw = metascope::from_hex(display_hex);
    if (raw.size() != 32) throw InvalidArgument("txid must be 32 bytes");
    Txid id;
    std::copy(raw.rbegin(), raw.rend(), id.bytes.begin());
    return id;
}

Txid Transaction::txid() const {
    Hash256 digest = sha256d(serialize_transaction(*this));
    Txid id;
    std::copy(digest.begin(), digest.end(), id.bytes.begin());
    return id;
}

Transaction parse_transaction(ByteSpan bytes) {
    try {
        return parse_impl(bytes);
    } catch (const MalformedTransaction&) {
        throw;  // includes WitnessUnsupported
    } catch (const TruncatedInput& e) {
        throw MalformedTransaction(e.what());
    } catch (const NonCanonicalEncoding& e) {
        throw MalformedTransaction(e.what());
    }
}

Bytes serialize_transaction(const Transaction& tx) {
    ByteWriter w;
    w.u32le(static_cast<std::uint32_t>(tx.version));
    w.varint(tx.inputs.size());
    for (const TxInput& input : tx.inputs) {
        w.raw(input.prev_txid.bytes);
        w.u32le(input.prev_index);
        w.varint(input.unlocking_script.raw.size());
        w.raw(input.unlocking_script.raw);
        w.u32le(input.sequence);
    }
    w.varint(tx.outputs.size());
    for (const TxOutput& output : tx.outputs) {
        w.u64le(output.value);
        w.varint(output.locking_script.raw.size());
        w.raw(output.locking_script.raw);
    }
    w.u32le(tx.locktime);
    return w.take();
}

}  // namespace metascope
