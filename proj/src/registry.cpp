#include "metascope/registry.hpp"

#include <algorithm>
#include <fstream>

namespace metascope {

const char* to_string(Category category) {
    switch (category) {
        case Category::NotaryDoc: return "Notary/Doc";
        case Category::Assets: return "Assets";
        case Category::DigitalArts: return "Digital Arts";
        case Category::KeyValueStore: return "Key-value store";
        case Category::Messages: return "Messages";
        case Category::ProofOfOwnership: return "Proof of ownership";
        case Category::NotIdentified: return "Not identified";
    }
    return "Not identified";
}

std::optional<Category> parse_category(std::string_view text) {
    if (text == "Notary/Doc") return Category::NotaryDoc;
    if (text == "Assets") return Category::Assets;
    if (text == "Digital Arts") return Category::DigitalArts;
    if (text == "Key-value store" || text == "Key value store") return Category::KeyValueStore;
    if (text == "Messages" || text == "Any Messages") return Category::Messages;
    if (text == "Proof of ownership") return Category::ProofOfOwnership;
    if (text == "Not identified") return Category::NotIdentified;
    return std::nullopt;
}

void ProtocolRegistry::add(ProtocolEntry entry) {
    for (const auto& existing : entries_) {
        if (existing.name == entry.name) {
            throw DuplicateEntry("duplicate protocol name: " + entry.name);
        }
        if (!entry.prefix.empty() && existing.prefix == entry.prefix) {
            throw DuplicateEntry("duplicate prefix " + to_hex(entry.prefix) + " (" +
                                 existing.name + " vs " + entry.name + ")");
        }
    }
    entries_.push_back(std::move(entry));
}

const ProtocolEntry* ProtocolRegistry::find(std::string_view name) const {
    for (const auto& entry : entries_) {
        if (entry.name == name) return &entry;
    }
    return nullptr;
}

const ProtocolEntry* ProtocolRegistry::longest_prefix_match(ByteSpan data) const {
    const ProtocolEntry* best = nullptr;
    for (const auto& entry : entries_) {
        if (entry.prefix.empty() || entry.prefix.size() > data.size()) continue;
        if (!std::equal(entry.prefix.begin(), entry.prefix.end(), data.begin())) continue;
        if (!best || entry.prefix.size() > best->prefix.size()) best = &entry;
    }
    return best;
}

ProtocolRegistry load_registry(const std::filesystem::path& path,
                               std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open registry file: " + path.string());

    ProtocolRegistry registry;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        // name,hex_prefix,category,notes — notes may contain commas.
        auto c1 = line.find(',');
        auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        auto c3 = c2 == std::string::npos ? std::string::npos : line.find(',', c2 + 1);
        if (c3 == std::string::npos) {
            throw RegistryParseError(line_no, "expected name,hex_prefix,category,notes");
        }
        ProtocolEntry entry;
        entry.name = line.substr(0, c1);
        std::string prefix_hex = line.substr(c1 + 1, c2 - c1 - 1);
        std::string category_text = line.substr(c2 + 1, c3 - c2 - 1);
        entry.notes = line.substr(c3 + 1);

        if (entry.name.empty()) throw RegistryParseError(line_no, "empty protocol name");
        if (!prefix_hex.empty()) {
            auto prefix = try_from_hex(prefix_hex);
            if (!prefix) throw RegistryParseError(line_no, "bad hex prefix: " + prefix_hex);
            entry.prefix = std::move(*prefix);
        }
        auto category = parse_category(category_text);
        if (!category) throw RegistryParseError(line_no, "unknown category: " + category_text);
        entry.category = *category;

        if (warnings && !entry.prefix.empty() && entry.prefix[0] == kDarkWalletTag) {
            warnings->push_back("entry '" + entry.name + "' has prefix " + to_hex(entry.prefix) +
                                ": 38-byte payloads with first byte 0x06 classify as dark-wallet "
                                "before registry lookup");
        }
        registry.add(std::move(entry));
    }
    return registry;
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Attributed: return "attributed";
        case Verdict::DarkWallet: return "darkwallet";
        case Verdict::Unattributed: return "unattributed";
    }
    return "unattributed";
}

std::string Classification::label() const {
    return verdict == Verdict::Attributed ? protocol : to_string(verdict);
}

bool is_dark_wallet_shaped(ByteSpan data) {
    return data.size() == kDarkWalletPayloadSize && data[0] == kDarkWalletTag;
}

Classification classify_payload(const OpReturnPayload& payload, const ProtocolRegistry& registry) {
    if (is_dark_wallet_shaped(payload.data)) return {Verdict::DarkWallet, ""};
    if (const ProtocolEntry* entry = registry.longest_prefix_match(payload.data)) {
        return {Verdict::Attributed, entry->name};
    }
    return {Verdict::Unattributed, ""};
}

std::vector<Classification> classify_corpus(std::span<const OpReturnPayload> payloads,
                                            const ProtocolRegistry& registry) {
    std::vector<Classification> out;
    out.reserve(payloads.size());
    for (const auto& payload : payloads) out.push_back(classify_payload(payload, registry));
    return out;
}

}  // namespace metascope
