#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "metascope/registry.hpp"
#include "support/corpus_gen.hpp"

using namespace metascope;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const char* name)
        : path(std::filesystem::temp_directory_path() /
               (std::string("metascope-test-") + std::to_string(::getpid()) + "-" + name)) {}
    ~TempFile() { std::filesystem::remove(path); }
};

OpReturnPayload payload_with_data(Bytes data) {
    OpReturnPayload p;
    p.push_opcode = static_cast<std::uint8_t>(data.size());
    p.raw_script = {0x6a, p.push_opcode};
    p.raw_script.insert(p.raw_script.end(), data.begin(), data.end());
    p.data = std::move(data);
    return p;
}

const std::filesystem::path kDataDir = METASCOPE_DATA_DIR;

}  // namespace

TEST_SUITE("registry") {

TEST_CASE("the shipped registry carries the 22 known protocols") {
    std::vector<std::string> warnings;
    ProtocolRegistry registry = load_registry(kDataDir / "registry.csv", &warnings);
    CHECK(registry.size() == 22);
    CHECK(warnings.empty());

    const std::vector<std::pair<std::string, Category>> expected = {
        {"Blockstore", Category::KeyValueStore},
        {"Factom", Category::NotaryDoc},
        {"Omni Layer", Category::Assets},
        {"Blocksign", Category::NotaryDoc},
        {"Colu", Category::Assets},
        {"Stampery", Category::NotaryDoc},
        {"Eternity wall", Category::Messages},
        {"Bitproof", Category::NotaryDoc},
        {"Open Assets", Category::Assets},
        {"Ascribe", Category::DigitalArts},
        {"Monegraph", Category::DigitalArts},
        {"Coinspark", Category::Assets},
        {"Proof of Existence", Category::NotaryDoc},
        {"Original My", Category::NotaryDoc},
        {"Open Provenance", Category::ProofOfOwnership},
        {"Remembr", Category::NotaryDoc},
        {"Crypto copyright", Category::NotaryDoc},
        {"LaPreuve", Category::NotaryDoc},
        {"ProveBit", Category::NotaryDoc},
        {"Blockchain Notary", Category::NotaryDoc},
        {"Counterparty", Category::Assets},
        {"Stampd", Category::NotaryDoc},
    };
    REQUIRE(registry.entries().size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(registry.entries()[i].name == expected[i].first);
        CHECK(registry.entries()[i].category == expected[i].second);
        // Prefixes ship unresolved; users fill them in from protocol docs.
        CHECK(registry.entries()[i].prefix.empty());
    }
}

TEST_CASE("duplicate prefixes and names are rejected") {
    TempFile file("registry.csv");
    {
        std::ofstream out(file.path);
        out << "Alpha,06,Assets,\n";
        out << "Beta,06,Assets,\n";
    }
    CHECK_THROWS_AS(load_registry(file.path), DuplicateEntry);

    {
        std::ofstream out(file.path);
        out << "Alpha,01,Assets,\n";
        out << "Alpha,02,Assets,\n";
    }
    CHECK_THROWS_AS(load_registry(file.path), DuplicateEntry);

    // Two entries with no prefix are fine; empty means unresolvable, not equal.
    {
        std::ofstream out(file.path);
        out << "Alpha,,Assets,\n";
        out << "Beta,,Assets,\n";
    }
    CHECK(load_registry(file.path).size() == 2);
}

TEST_CASE("an empty file is an empty registry") {
    TempFile file("empty.csv");
    { std::ofstream out(file.path); }
    CHECK(load_registry(file.path).size() == 0);
}

TEST_CASE("parse errors carry the line number") {
    TempFile file("bad.csv");
    {
        std::ofstream out(file.path);
        out << "# comment\n";
        out << "Alpha,zz,Assets,\n";
    }
    try {
        load_registry(file.path);
        FAIL("expected RegistryParseError");
    } catch (const RegistryParseError& e) {
        CHECK(e.line == 2);
    }

    {
        std::ofstream out(file.path);
        out << "Alpha,01,NoSuchCategory,\n";
    }
    CHECK_THROWS_AS(load_registry(file.path), RegistryParseError);

    {
        std::ofstream out(file.path);
        out << "only-two,fields\n";
    }
    CHECK_THROWS_AS(load_registry(file.path), RegistryParseError);
}

TEST_CASE("notes keep their commas") {
    TempFile file("notes.csv");
    {
        std::ofstream out(file.path);
        out << "Alpha,4f41,Assets,tag bytes, see protocol docs\n";
    }
    ProtocolRegistry registry = load_registry(file.path);
    REQUIRE(registry.size() == 1);
    CHECK(registry.entries()[0].notes == "tag bytes, see protocol docs");
    CHECK(registry.entries()[0].prefix == from_hex("4f41"));
}

TEST_CASE("dark-wallet shape wins over any registry prefix") {
    TempFile file("dw.csv");
    {
        std::ofstream out(file.path);
        out << "Imposter,06,Not identified,\n";
    }
    std::vector<std::string> warnings;
    ProtocolRegistry registry = load_registry(file.path, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("Imposter") != std::string::npos);

    Bytes dw(38, 0xcd);
    dw[0] = 0x06;
    CHECK(classify_payload(payload_with_data(dw), registry).verdict == Verdict::DarkWallet);

    // Same first byte but a different length is NOT dark wallet; with the
    // 0x06 prefix registered it attributes, without it it stays unattributed.
    Bytes short_payload{0x06, 0x01, 0x02};
    Classification cls = classify_payload(payload_with_data(short_payload), registry);
    CHECK(cls.verdict == Verdict::Attributed);
    CHECK(cls.protocol == "Imposter");

    ProtocolRegistry empty;
    CHECK(classify_payload(payload_with_data(short_payload), empty).verdict ==
          Verdict::Unattributed);
    Bytes len39(39, 0x06);
    CHECK(classify_payload(payload_with_data(len39), empty).verdict == Verdict::Unattributed);
}

TEST_CASE("longest prefix wins") {
    ProtocolRegistry registry;
    registry.add({"Short", from_hex("4142"), Category::Assets, ""});
    registry.add({"Long", from_hex("41424344"), Category::Assets, ""});

    Classification cls = classify_payload(payload_with_data(from_hex("414243444546")), registry);
    CHECK(cls.verdict == Verdict::Attributed);
    CHECK(cls.protocol == "Long");

    // The shorter prefix still catches inputs the longer one does not.
    cls = classify_payload(payload_with_data(from_hex("4142ff")), registry);
    CHECK(cls.protocol == "Short");

    // Adding the longer prefix never flipped the short match to a worse one.
    ProtocolRegistry only_short;
    only_short.add({"Short", from_hex("4142"), Category::Assets, ""});
    CHECK(classify_payload(payload_with_data(from_hex("4142ff")), only_short).protocol ==
          "Short");
}

TEST_CASE("empty payload against an empty registry is unattributed") {
    ProtocolRegistry empty;
    CHECK(classify_payload(payload_with_data({}), empty).verdict == Verdict::Unattributed);
}

TEST_CASE("classification is deterministic") {
    ProtocolRegistry registry;
    registry.add({"Alpha", from_hex("20a5"), Category::Assets, ""});
    OpReturnPayload p = payload_with_data(from_hex("20a5ffee"));
    Classification first = classify_payload(p, registry);
    for (int i = 0; i < 50; ++i) CHECK(classify_payload(p, registry) == first);
}

TEST_CASE("corpus classification preserves order and proportions") {
    ProtocolRegistry registry;
    registry.add({"Known", from_hex("aa"), Category::Assets, ""});

    std::vector<OpReturnPayload> payloads;
    for (int i = 0; i < 100; ++i) {
        payloads.push_back(payload_with_data(i < 51 ? from_hex("aa01") : from_hex("bb01")));
    }
    auto verdicts = classify_corpus(payloads, registry);
    REQUIRE(verdicts.size() == 100);
    int attributed = 0, unattributed = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].verdict == Verdict::Attributed) {
            ++attributed;
            CHECK(i < 51);  // order preserved
        } else {
            ++unattributed;
        }
    }
    CHECK(attributed == 51);
    CHECK(unattributed == 49);

    CHECK(classify_corpus({}, registry).empty());
}

TEST_CASE("synthetic labeled corpus classifies to ground truth exactly") {
    std::mt19937_64 rng(123);
    auto corpus = corpusgen::make_protocol_mix_corpus(rng, 2000);
    for (const auto& item : corpus.items) {
        CHECK(classify_payload(item.payload, corpus.registry) == item.truth);
    }
}

}  // TEST_SUITE
