#include "metascope/stealth.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <fstream>

#include "metascope/hash.hpp"
#include "metascope/registry.hpp"
#include "metascope/script.hpp"

namespace metascope::stealth {

SharedSecret dh_shared_secret(const Scalar& private_key, const CurvePoint& other_public) {
    return SharedSecret{other_public.mul(private_key)};
}

CurvePoint basic_transfer_address(const SharedSecret& secret) {
    return CurvePoint::base_mul(hash_point_to_scalar(secret.point));
}

CurvePoint asym_transfer_address(const SharedSecret& secret, const CurvePoint& spend_public) {
    return CurvePoint::base_mul(hash_point_to_scalar(secret.point)).add(spend_public);
}

Scalar derive_spend_key(const SharedSecret& secret, const Scalar& spend_private) {
    return hash_point_to_scalar(secret.point).add(spend_private);
}

EntropySource system_entropy() {
    return [](std::span<std::uint8_t> buf) {
        if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
            throw EntropyUnavailable("system random source failed");
        }
    };
}

Scalar random_scalar(const EntropySource& entropy) {
    // Rejection sampling; a valid draw fails with probability < 2^-128, so a
    // bounded loop only ever trips on a broken source.
    std::array<std::uint8_t, Scalar::kSize> buf{};
    for (int attempt = 0; attempt < 256; ++attempt) {
        entropy(buf);
        if (auto s = Scalar::try_from_bytes(buf)) return *s;
    }
    throw EntropyUnavailable("random source keeps producing out-of-range scalars");
}

StealthIdentity keygen(const EntropySource& entropy) {
    Scalar spend = random_scalar(entropy);
    Scalar view = random_scalar(entropy);
    return StealthIdentity{spend, CurvePoint::base_mul(spend), view, CurvePoint::base_mul(view)};
}

Bytes stealth_payload_bytes(const CurvePoint& ephemeral_public, const PayloadNonce& nonce) {
    Bytes data;
    data.reserve(kStealthPayloadSize);
    data.push_back(kStealthPayloadTag);
    data.insert(data.end(), nonce.begin(), nonce.end());
    const auto& compressed = ephemeral_public.compressed();
    data.insert(data.end(), compressed.begin(), compressed.end());
    return data;
}

std::optional<CurvePoint> ephemeral_from_payload(ByteSpan data) {
    if (data.size() != kStealthPayloadSize || data[0] != kStealthPayloadTag) return std::nullopt;
    return CurvePoint::try_from_compressed(data.subspan(5, CurvePoint::kCompressedSize));
}

StealthPayment send_stealth(const Scalar& ephemeral, const CurvePoint& view_public,
                            const CurvePoint& spend_public, const PayloadNonce& nonce) {
    SharedSecret secret = dh_shared_secret(ephemeral, view_public);
    CurvePoint transfer = asym_transfer_address(secret, spend_public);
    CurvePoint ephemeral_public = CurvePoint::base_mul(ephemeral);

    OpReturnPayload payload;
    payload.data = stealth_payload_bytes(ephemeral_public, nonce);
    payload.push_opcode = static_cast<std::uint8_t>(payload.data.size());
    payload.raw_script.push_back(opcode::OP_RETURN);
    payload.raw_script.push_back(payload.push_opcode);
    payload.raw_script.insert(payload.raw_script.end(), payload.data.begin(), payload.data.end());
    return {transfer, ephemeral_public, std::move(payload)};
}

StealthPayment send_stealth(const EntropySource& entropy, const CurvePoint& view_public,
                            const CurvePoint& spend_public) {
    Scalar ephemeral = random_scalar(entropy);
    PayloadNonce nonce{};
    entropy(nonce);
    return send_stealth(ephemeral, view_public, spend_public, nonce);
}

bool script_pays_point(ByteSpan script, const CurvePoint& point) {
    Script parsed = Script::from_raw(Bytes(script.begin(), script.end()));
    ScriptType type = classify_script_type(parsed);
    if (type == ScriptType::P2PK) {
        const Bytes& key = parsed.ops[0].data;
        if (key.size() == 33) {
            return std::equal(key.begin(), key.end(), point.compressed().begin());
        }
        auto uncompressed = point.uncompressed();
        return std::equal(key.begin(), key.end(), uncompressed.begin());
    }
    if (type == ScriptType::P2PKH) {
        const Bytes& digest = parsed.ops[2].data;
        Hash160 compressed_hash = hash160(point.compressed());
        if (std::equal(digest.begin(), digest.end(), compressed_hash.begin())) return true;
        Hash160 uncompressed_hash = hash160(point.uncompressed());
        return std::equal(digest.begin(), digest.end(), uncompressed_hash.begin());
    }
    return false;
}

namespace {

std::vector<Detection> scan_impl(std::span<const ScanInput> inputs, const Scalar& view_private,
                                 const CurvePoint& spend_public, const Scalar* spend_private,
                                 std::vector<std::string>* warnings) {
    std::vector<Detection> detections;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const ScanInput& input = inputs[i];
        if (!is_dark_wallet_shaped(input.payload.data)) continue;
        auto ephemeral = ephemeral_from_payload(input.payload.data);
        if (!ephemeral) {
            if (warnings) {
                warnings->push_back("payload " + std::to_string(i) +
                                    ": embedded point is not on the curve, skipped");
            }
            continue;
        }
        try {
            SharedSecret secret = dh_shared_secret(view_private, *ephemeral);
            CurvePoint candidate = asym_transfer_address(secret, spend_public);
            for (std::size_t j = 0; j < input.candidate_scripts.size(); ++j) {
                if (!script_pays_point(input.candidate_scripts[j], candidate)) continue;
                Detection d{i, input.payload.tx_ref, j, candidate, std::nullopt};
                if (spend_private) d.spend_key = derive_spend_key(secret, *spend_private);
                detections.push_back(std::move(d));
            }
        } catch (const Error& e) {
            // DegenerateHash / ZeroResult territory; astronomically rare but
            // the scan must keep going.
            if (warnings) {
                warnings->push_back("payload " + std::to_string(i) + ": " + e.what() +
                                    ", skipped");
            }
        }
    }
    return detections;
}

}  // namespace

std::vector<Detection> scan_payments(std::span<const ScanInput> inputs,
                                     const StealthIdentity& identity,
                                     std::vector<std::string>* warnings) {
    if (!identity.view_private) {
        throw InvalidArgument("scan requires an identity with a view key");
    }
    return scan_impl(inputs, *identity.view_private, identity.spend_public,
                     &identity.spend_private, warnings);
}

std::vector<Detection> view_only_scan(std::span<const ScanInput> inputs,
                                      const Scalar& view_private, const CurvePoint& spend_public,
                                      std::vector<std::string>* warnings) {
    return scan_impl(inputs, view_private, spend_public, nullptr, warnings);
}

StealthIdentity KeyFile::to_identity() const {
    if (!spend_private) throw InvalidArgument("key file has no spend key");
    StealthIdentity id{
        .spend_private = *spend_private,
        .spend_public = CurvePoint::base_mul(*spend_private),
        .view_private = view_private,
        .view_public = std::nullopt,
    };
    if (view_private) id.view_public = CurvePoint::base_mul(*view_private);
    return id;
}

KeyFile load_key_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open key file: " + path.string());
    KeyFile keys;
    std::string line;
    int line_no = 0;
    auto value_of = [&](std::string_view tagged, std::string_view tag) {
        std::string_view rest = tagged.substr(tag.size());
        while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
            rest.remove_prefix(1);
        }
        return std::string(rest);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            if (line.starts_with("spend-pub:")) {
                keys.spend_public = CurvePoint::from_hex(value_of(line, "spend-pub:"));
            } else if (line.starts_with("view-pub:")) {
                keys.view_public = CurvePoint::from_hex(value_of(line, "view-pub:"));
            } else if (line.starts_with("spend:")) {
                keys.spend_private = Scalar::from_hex(value_of(line, "spend:"));
            } else if (line.starts_with("view:")) {
                keys.view_private = Scalar::from_hex(value_of(line, "view:"));
            } else {
                throw InvalidArgument("unknown key tag");
            }
        } catch (const Error& e) {
            throw InvalidArgument("key file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!keys.spend_private && !(keys.view_private && keys.spend_public)) {
        throw InvalidArgument("key file needs spend:, or view: with spend-pub:");
    }
    return keys;
}

void save_identity(const StealthIdentity& identity, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write key file: " + path.string());
    out << "spend: " << identity.spend_private.hex() << "\n";
    if (identity.view_private) out << "view: " << identity.view_private->hex() << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace metascope::stealth
