#include "metascope/opreturn.hpp"

#include <fstream>

#include "metascope/script.hpp"

namespace metascope {

std::optional<OpReturnPayload> try_payload_from_script(ByteSpan script, const TxRef& ref,
                                                       std::string* reason) {
    if (script.empty() || script[0] != opcode::OP_RETURN) {
        if (reason) *reason = "script does not start with OP_RETURN";
        return std::nullopt;
    }
    Script parsed;
    try {
        parsed = parse_script(script);
    } catch (const MalformedScript& e) {
        if (reason) *reason = e.what();
        return std::nullopt;
    }

    OpReturnPayload payload;
    payload.tx_ref = ref;
    payload.raw_script.assign(script.begin(), script.end());
    // Data = first push after OP_RETURN. A bare OP_RETURN, or one followed by
    // a non-push op, carries no data.
    for (std::size_t i = 1; i < parsed.ops.size(); ++i) {
        if (parsed.ops[i].is_push()) {
            payload.push_opcode = parsed.ops[i].op;
            payload.data = parsed.ops[i].data;
            break;
        }
    }
    return payload;
}

std::vector<OpReturnPayload> extract_op_return(const Transaction& tx,
                                               std::vector<std::string>* warnings) {
    std::vector<OpReturnPayload> payloads;
    Txid id = tx.txid();
    for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
        const Bytes& raw = tx.outputs[i].locking_script.raw;
        if (raw.empty() || raw[0] != opcode::OP_RETURN) continue;
        std::string reason;
        auto payload =
            try_payload_from_script(raw, TxRef{id, static_cast<std::uint32_t>(i)}, &reason);
        if (!payload) {
            if (warnings) {
                warnings->push_back("output " + std::to_string(i) + " of " + id.hex() +
                                    " skipped: " + reason);
            }
            continue;
        }
        payloads.push_back(std::move(*payload));
    }
    return payloads;
}

SizeVerdict validate_payload_size(const OpReturnPayload& payload, const SizeProfile& profile) {
    if (payload.data.size() <= profile.max_data_bytes) return {true, ""};
    return {false, "payload data is " + std::to_string(payload.data.size()) +
                       " bytes, profile '" + profile.name + "' allows " +
                       std::to_string(profile.max_data_bytes)};
}

std::string decode_ascii(ByteSpan data) {
    std::string out;
    out.reserve(data.size());
    for (std::uint8_t b : data) out.push_back(b >= 0x20 && b <= 0x7e ? static_cast<char>(b) : '.');
    return out;
}

std::string decode_ascii(const OpReturnPayload& payload) { return decode_ascii(payload.data); }

std::vector<SizeProfile> default_profiles() {
    return {
        {"btc", 80},
        {"btc-legacy", 20},
        {"bch-2018", 223},
    };
}

std::vector<SizeProfile> load_size_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile file: " + path.string());
    std::vector<SizeProfile> profiles;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ProfileParseError(line_no, "expected name,max");
        std::string name = line.substr(0, comma);
        std::string max_text = line.substr(comma + 1);
        if (name.empty()) throw ProfileParseError(line_no, "empty profile name");
        std::size_t pos = 0;
        unsigned long max_bytes = 0;
        try {
            max_bytes = std::stoul(max_text, &pos);
        } catch (const std::exception&) {
            throw ProfileParseError(line_no, "bad max_data_bytes: " + max_text);
        }
        if (pos != max_text.size() || max_bytes == 0) {
            throw ProfileParseError(line_no, "bad max_data_bytes: " + max_text);
        }
        for (const auto& p : profiles) {
            if (p.name == name) throw ProfileParseError(line_no, "duplicate profile: " + name);
        }
        profiles.push_back({std::move(name), max_bytes});
    }
    return profiles;
}

const SizeProfile* find_profile(const std::vector<SizeProfile>& profiles, std::string_view name) {
    for (const auto& p : profiles) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

}  // namespace metascope
