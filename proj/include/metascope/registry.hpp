#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metascope/bytes.hpp"
#include "metascope/opreturn.hpp"

namespace metascope {

enum class Category {
    NotaryDoc,
    Assets,
    DigitalArts,
    KeyValueStore,
    Messages,
    ProofOfOwnership,
    NotIdentified,
};

const char* to_string(Category category);
std::optional<Category> parse_category(std::string_view text);

struct ProtocolEntry {
    std::string name;
    Bytes prefix;  // empty = known protocol with no resolvable byte prefix
    Category category = Category::NotIdentified;
    std::string notes;
};

/// Ordered set of protocol entries with unique names and unique non-empty
/// prefixes. Immutable after load; safe to share across threads.
class ProtocolRegistry {
public:
    /// Throws DuplicateEntry on a repeated name or prefix.
    void add(ProtocolEntry entry);

    const std::vector<ProtocolEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    const ProtocolEntry* find(std::string_view name) const;

    /// Longest registered prefix that starts `data`, or nullptr.
    const ProtocolEntry* longest_prefix_match(ByteSpan data) const;

private:
    std::vector<ProtocolEntry> entries_;
};

/// Registry file: `name,hex_prefix,category,notes` lines, `#` comments.
/// Notes may contain commas. Warns (when a sink is given) about entries whose
/// prefix the dark-wallet rule shadows.
ProtocolRegistry load_registry(const std::filesystem::path& path,
                               std::vector<std::string>* warnings = nullptr);

enum class Verdict { Attributed, DarkWallet, Unattributed };

const char* to_string(Verdict verdict);

struct Classification {
    Verdict verdict = Verdict::Unattributed;
    std::string protocol;  // set iff Attributed

    /// Report label: the protocol name, "darkwallet", or "unattributed".
    std::string label() const;

    bool operator==(const Classification&) const = default;
};

/// Dark-wallet stealth payloads: exactly 38 data bytes, first byte 0x06.
constexpr std::size_t kDarkWalletPayloadSize = 38;
constexpr std::uint8_t kDarkWalletTag = 0x06;

bool is_dark_wallet_shaped(ByteSpan data);

/// Dark-wallet shape first, then longest registered prefix, else unattributed.
Classification classify_payload(const OpReturnPayload& payload, const ProtocolRegistry& registry);

/// Order-preserving map of classify_payload; skips nothing.
std::vector<Classification> classify_corpus(std::span<const OpReturnPayload> payloads,
                                            const ProtocolRegistry& registry);

}  // namespace metascope
