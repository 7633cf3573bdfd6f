#include "metascope/corpus.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "metascope/script.hpp"

namespace metascope {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

int to_int(std::string_view s) {
    int v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

std::vector<std::string> split_exact(const std::string& line, std::size_t fields) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (out.size() + 1 < fields) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) return {};
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    std::string last = line.substr(start);
    if (last.find(',') != std::string::npos) return {};
    out.push_back(std::move(last));
    return out;
}

MetadataRecord record_from_fields(const std::string& ts, const std::string& block,
                                  const std::string& txid_hex, const std::string& script_hex,
                                  int line_no) {
    MetadataRecord rec;
    try {
        rec.timestamp = parse_rfc3339(ts);
    } catch (const Error& e) {
        throw CorpusParseError(line_no, e.what());
    }
    if (!all_digits(block)) throw CorpusParseError(line_no, "bad block height: " + block);
    rec.block_height = std::stoull(block);
    try {
        rec.txid = Txid::from_hex(txid_hex);
    } catch (const Error&) {
        throw CorpusParseError(line_no, "bad txid: " + txid_hex);
    }
    auto script = try_from_hex(script_hex);
    if (!script) throw CorpusParseError(line_no, "bad script hex");
    rec.script = std::move(*script);
    if (rec.script.empty() || rec.script[0] != opcode::OP_RETURN) {
        throw CorpusParseError(line_no, "script does not start with OP_RETURN");
    }
    std::string reason;
    auto payload = try_payload_from_script(rec.script, TxRef{rec.txid, 0}, &reason);
    if (!payload) throw CorpusParseError(line_no, reason);
    rec.ascii = decode_ascii(*payload);
    return rec;
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SSZ, nothing more, nothing less.
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
        throw InvalidArgument("timestamp must look like 2013-03-29T12:00:00Z");
    }
    auto year_text = text.substr(0, 4);
    auto month_text = text.substr(5, 2);
    auto day_text = text.substr(8, 2);
    auto hour_text = text.substr(11, 2);
    auto minute_text = text.substr(14, 2);
    auto second_text = text.substr(17, 2);
    for (auto part : {year_text, month_text, day_text, hour_text, minute_text, second_text}) {
        if (!all_digits(part)) throw InvalidArgument("timestamp contains non-digits");
    }

    using namespace std::chrono;
    year_month_day ymd{year{to_int(year_text)}, month{static_cast<unsigned>(to_int(month_text))},
                       day{static_cast<unsigned>(to_int(day_text))}};
    if (!ymd.ok()) throw InvalidArgument("timestamp has an invalid calendar date");
    int h = to_int(hour_text), m = to_int(minute_text), s = to_int(second_text);
    if (h > 23 || m > 59 || s > 59) throw InvalidArgument("timestamp has an invalid time of day");
    return sys_days{ymd} + hours{h} + minutes{m} + seconds{s};
}

std::string format_rfc3339(Timestamp ts) {
    using namespace std::chrono;
    auto day_point = floor<days>(ts);
    year_month_day ymd{day_point};
    hh_mm_ss time{ts - day_point};
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()),
                  static_cast<long>(time.hours().count()),
                  static_cast<long>(time.minutes().count()),
                  static_cast<long>(time.seconds().count()));
    return buf;
}

OpReturnPayload MetadataRecord::payload() const {
    auto payload = try_payload_from_script(script, TxRef{txid, 0});
    if (!payload) throw Error("record script no longer decodes");
    return *payload;
}

std::vector<MetadataRecord> read_corpus(std::istream& in) {
    std::vector<MetadataRecord> records;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kCorpusHeader) {
                throw CorpusParseError(line_no, std::string("expected header ") + kCorpusHeader);
            }
            saw_header = true;
            continue;
        }
        auto fields = split_exact(line, 4);
        if (fields.empty()) throw CorpusParseError(line_no, "expected 4 comma-separated fields");
        records.push_back(
            record_from_fields(fields[0], fields[1], fields[2], fields[3], line_no));
    }
    if (!saw_header && line_no > 0) throw CorpusParseError(1, "missing corpus header");
    return records;
}

std::vector<MetadataRecord> read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path.string());
    return read_corpus(in);
}

void write_corpus(std::span<const MetadataRecord> records, std::ostream& out) {
    out << kCorpusHeader << "\n";
    for (const auto& rec : records) {
        out << format_rfc3339(rec.timestamp) << ',' << rec.block_height << ',' << rec.txid.hex()
            << ',' << to_hex(rec.script) << "\n";
    }
}

void write_corpus(std::span<const MetadataRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write corpus file: " + path.string());
    write_corpus(records, out);
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ScanRecord> read_scan_corpus(std::istream& in) {
    std::vector<ScanRecord> rows;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kScanCorpusHeader) {
                throw CorpusParseError(line_no,
                                       std::string("expected header ") + kScanCorpusHeader);
            }
            saw_header = true;
            continue;
        }
        auto fields = split_exact(line, 5);
        if (fields.empty()) throw CorpusParseError(line_no, "expected 5 comma-separated fields");
        ScanRecord row;
        row.record = record_from_fields(fields[0], fields[1], fields[2], fields[3], line_no);
        if (!fields[4].empty()) {
            auto script = try_from_hex(fields[4]);
            if (!script) throw CorpusParseError(line_no, "bad output script hex");
            row.output_script = std::move(*script);
        }
        rows.push_back(std::move(row));
    }
    if (!saw_header && line_no > 0) throw CorpusParseError(1, "missing corpus header");
    return rows;
}

std::vector<ScanRecord> read_scan_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path.string());
    return read_scan_corpus(in);
}

void write_scan_corpus(std::span<const ScanRecord> rows, std::ostream& out) {
    out << kScanCorpusHeader << "\n";
    for (const auto& row : rows) {
        out << format_rfc3339(row.record.timestamp) << ',' << row.record.block_height << ','
            << row.record.txid.hex() << ',' << to_hex(row.record.script) << ','
            << to_hex(row.output_script) << "\n";
    }
}

void write_scan_corpus(std::span<const ScanRecord> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write corpus file: " + path.string());
    write_scan_corpus(rows, out);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace metascope
