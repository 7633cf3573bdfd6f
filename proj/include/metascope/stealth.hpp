#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "metascope/ec.hpp"
#include "metascope/opreturn.hpp"

namespace metascope::stealth {

/// Diffie-Hellman point shared by sender and receiver.
struct SharedSecret {
    CurvePoint point;

    bool operator==(const SharedSecret&) const = default;
};

/// private * other_public. Symmetric: a*(b*G) == b*(a*G).
SharedSecret dh_shared_secret(const Scalar& private_key, const CurvePoint& other_public);

/// E = H(S)*G. Pedagogical only: anyone who knows S (including the sender)
/// can also derive the private key, so both parties can spend.
CurvePoint basic_transfer_address(const SharedSecret& secret);

/// E = H(S)*G + B. The sender can compute the address but not its key.
CurvePoint asym_transfer_address(const SharedSecret& secret, const CurvePoint& spend_public);

/// e = H(S) + b (mod n); e*G equals the asymmetric transfer address.
Scalar derive_spend_key(const SharedSecret& secret, const Scalar& spend_private);

/// Fills a buffer with random bytes; throws EntropyUnavailable on failure.
using EntropySource = std::function<void(std::span<std::uint8_t>)>;

EntropySource system_entropy();

/// Rejection-samples until the bytes land in [1, n). Throws
/// EntropyUnavailable when the source keeps producing out-of-range values.
Scalar random_scalar(const EntropySource& entropy);

/// Receiver-side key material: spend pair always, view pair when the wallet
/// supports detection without the spend key.
struct StealthIdentity {
    Scalar spend_private;
    CurvePoint spend_public;
    std::optional<Scalar> view_private;
    std::optional<CurvePoint> view_public;
};

/// Fresh identity with both pairs.
StealthIdentity keygen(const EntropySource& entropy = system_entropy());

/// Stealth payment payload layout (38 bytes): tag 0x06, 4-byte nonce,
/// 33-byte compressed ephemeral public key.
constexpr std::size_t kStealthPayloadSize = 38;
constexpr std::uint8_t kStealthPayloadTag = 0x06;
using PayloadNonce = std::array<std::uint8_t, 4>;

Bytes stealth_payload_bytes(const CurvePoint& ephemeral_public, const PayloadNonce& nonce);

/// Ephemeral key recovered from payload data; nullopt when the payload is not
/// stealth-shaped or its point bytes are invalid.
std::optional<CurvePoint> ephemeral_from_payload(ByteSpan data);

struct StealthPayment {
    CurvePoint transfer_address;  // E
    CurvePoint ephemeral_public;  // R = r*G
    OpReturnPayload payload;      // OP_RETURN script embedding R
};

/// One-time payment: S = r*V, E = H(S)*G + B, R published in the payload.
StealthPayment send_stealth(const Scalar& ephemeral, const CurvePoint& view_public,
                            const CurvePoint& spend_public, const PayloadNonce& nonce);

/// Convenience overload drawing the ephemeral key and nonce from `entropy`.
StealthPayment send_stealth(const EntropySource& entropy, const CurvePoint& view_public,
                            const CurvePoint& spend_public);

/// A payload paired with the locking scripts of the outputs that might carry
/// the matching payment.
struct ScanInput {
    OpReturnPayload payload;
    std::vector<Bytes> candidate_scripts;
};

struct Detection {
    std::size_t input_index = 0;
    TxRef tx_ref;
    std::size_t script_index = 0;
    CurvePoint transfer_address;
    std::optional<Scalar> spend_key;  // absent in view-only scans
};

/// Detects payments to `identity` (requires view_private) and derives the
/// spend key for each. Malformed payloads are skipped with a warning.
std::vector<Detection> scan_payments(std::span<const ScanInput> inputs,
                                     const StealthIdentity& identity,
                                     std::vector<std::string>* warnings = nullptr);

/// Same detections from the view key and public spend key alone; no spend
/// keys can be produced.
std::vector<Detection> view_only_scan(std::span<const ScanInput> inputs,
                                      const Scalar& view_private, const CurvePoint& spend_public,
                                      std::vector<std::string>* warnings = nullptr);

/// True when the script pays the point via P2PK or P2PKH, in compressed or
/// uncompressed key form.
bool script_pays_point(ByteSpan script, const CurvePoint& point);

/// Key file: `spend:`/`view:` lines carry hex-encoded 32-byte scalars;
/// `spend-pub:` carries a compressed point for view-only wallets.
struct KeyFile {
    std::optional<Scalar> spend_private;
    std::optional<Scalar> view_private;
    std::optional<CurvePoint> spend_public;
    std::optional<CurvePoint> view_public;

    /// Throws InvalidArgument unless a full identity can be formed.
    StealthIdentity to_identity() const;
    bool view_only() const { return !spend_private && view_private && spend_public; }
};

KeyFile load_key_file(const std::filesystem::path& path);
void save_identity(const StealthIdentity& identity, const std::filesystem::path& path);

}  // namespace metascope::stealth
