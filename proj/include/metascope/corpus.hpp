#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "metascope/bytes.hpp"
#include "metascope/opreturn.hpp"
#include "metascope/tx.hpp"

namespace metascope {

using Timestamp = std::chrono::sys_seconds;

/// Strict `YYYY-MM-DDTHH:MM:SSZ`; throws InvalidArgument otherwise.
Timestamp parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp ts);

/// One ingested null-data observation.
struct MetadataRecord {
    Timestamp timestamp{};
    std::uint64_t block_height = 0;
    Txid txid;
    Bytes script;       // full locking script, first byte 0x6a
    std::string ascii;  // printable rendering of the payload data

    OpReturnPayload payload() const;

    bool operator==(const MetadataRecord&) const = default;
};

inline constexpr const char* kCorpusHeader = "timestamp,block,txid,script_hex";
inline constexpr const char* kScanCorpusHeader = "timestamp,block,txid,script_hex,output_script_hex";

/// Corpus CSV: header above, then one record per line in file order.
/// Throws CorpusParseError with the offending line number.
std::vector<MetadataRecord> read_corpus(const std::filesystem::path& path);
std::vector<MetadataRecord> read_corpus(std::istream& in);

void write_corpus(std::span<const MetadataRecord> records, std::ostream& out);
void write_corpus(std::span<const MetadataRecord> records, const std::filesystem::path& path);

/// Scanner input row: a corpus record plus the locking script of the output
/// that may carry the payment (empty = no candidate).
struct ScanRecord {
    MetadataRecord record;
    Bytes output_script;
};

std::vector<ScanRecord> read_scan_corpus(const std::filesystem::path& path);
std::vector<ScanRecord> read_scan_corpus(std::istream& in);

void write_scan_corpus(std::span<const ScanRecord> rows, std::ostream& out);
void write_scan_corpus(std::span<const ScanRecord> rows, const std::filesystem::path& path);

}  // namespace metascope
