// Regenerates the shipped stealth demo fixture (data/fixtures/). Fully
// deterministic: fixed seeds, fixed timestamps.
//
//   stealth_fixture_gen <keys-out> <corpus-out>

#include <cstdio>
#include <memory>
#include <random>

#include "metascope/corpus.hpp"
#include "metascope/hash.hpp"
#include "metascope/stealth.hpp"

using namespace metascope;

namespace {

stealth::EntropySource seeded_entropy(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](std::span<std::uint8_t> buf) {
        for (auto& b : buf) b = static_cast<std::uint8_t>((*rng)() & 0xff);
    };
}

Bytes p2pkh_for(const stealth::CurvePoint& point) {
    Bytes script{0x76, 0xa9, 0x14};
    Hash160 digest = hash160(point.compressed());
    script.insert(script.end(), digest.begin(), digest.end());
    script.push_back(0x88);
    script.push_back(0xac);
    return script;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <keys-out> <corpus-out>\n", argv[0]);
        return 2;
    }

    stealth::StealthIdentity demo = stealth::keygen(seeded_entropy(20140401));
    stealth::StealthIdentity other = stealth::keygen(seeded_entropy(20140402));
    stealth::save_identity(demo, argv[1]);

    auto entropy = seeded_entropy(20140403);
    std::vector<ScanRecord> rows;
    for (int i = 0; i < 10; ++i) {
        bool mine = (i == 1 || i == 4 || i == 8);
        const auto& to = mine ? demo : other;
        stealth::StealthPayment payment =
            stealth::send_stealth(entropy, *to.view_public, to.spend_public);

        ScanRecord row;
        char ts[32];
        std::snprintf(ts, sizeof(ts), "2014-04-%02dT12:00:00Z", i + 1);
        row.record.timestamp = parse_rfc3339(ts);
        row.record.block_height = 295000 + static_cast<std::uint64_t>(i) * 12;
        Bytes seed{static_cast<std::uint8_t>(i), 0x44, 0x57};
        Hash256 id = sha256(seed);
        std::copy(id.begin(), id.end(), row.record.txid.bytes.begin());
        row.record.script = payment.payload.raw_script;
        row.record.ascii = decode_ascii(payment.payload);
        row.output_script = p2pkh_for(payment.transfer_address);
        rows.push_back(std::move(row));
    }
    write_scan_corpus(rows, std::filesystem::path(argv[2]));
    std::fprintf(stderr, "wrote %s and %s\n", argv[1], argv[2]);
    return 0;
}
