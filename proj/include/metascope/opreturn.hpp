#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metascope/bytes.hpp"
#include "metascope/tx.hpp"

namespace metascope {

struct TxRef {
    Txid txid;
    std::uint32_t vout = 0;

    bool operator==(const TxRef&) const = default;
};

/// Metadata record carried by a null-data output: the full script, the push
/// opcode that introduced the data, and the data bytes themselves.
struct OpReturnPayload {
    TxRef tx_ref;
    std::uint8_t push_opcode = 0;
    Bytes data;
    Bytes raw_script;

    bool operator==(const OpReturnPayload&) const = default;
};

/// Decode a locking script of the shape OP_RETURN [push data ...] into a
/// payload. Returns nullopt (with a reason when requested) if the script does
/// not start with OP_RETURN or its ops do not decode. A bare OP_RETURN or a
/// trailing non-push op yields an empty payload.
std::optional<OpReturnPayload> try_payload_from_script(ByteSpan script, const TxRef& ref,
                                                       std::string* reason = nullptr);

/// One payload per output whose locking script starts with OP_RETURN, in
/// output order. Outputs whose script fails to decode are skipped and a note
/// is appended to `warnings` when provided.
std::vector<OpReturnPayload> extract_op_return(const Transaction& tx,
                                               std::vector<std::string>* warnings = nullptr);

struct SizeProfile {
    std::string name;
    std::size_t max_data_bytes = 0;
};

struct SizeVerdict {
    bool accepted = false;
    std::string reason;  // empty when accepted
};

SizeVerdict validate_payload_size(const OpReturnPayload& payload, const SizeProfile& profile);

/// Printable ASCII passes through, everything else becomes '.'.
/// Length-preserving, never fails.
std::string decode_ascii(ByteSpan data);
std::string decode_ascii(const OpReturnPayload& payload);

/// Built-in profiles: btc (80), btc-legacy (20), bch-2018 (223).
std::vector<SizeProfile> default_profiles();

/// File of `name,max_data_bytes` lines; `#` comments and blank lines allowed.
std::vector<SizeProfile> load_size_profiles(const std::filesystem::path& path);

const SizeProfile* find_profile(const std::vector<SizeProfile>& profiles, std::string_view name);

}  // namespace metascope
