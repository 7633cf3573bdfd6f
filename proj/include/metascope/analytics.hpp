#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "metascope/corpus.hpp"
#include "metascope/registry.hpp"

namespace metascope {

enum class Period { Year, Month };

/// A record's timestamp paired with its classification; the unit the
/// aggregation ops fold over.
struct ClassifiedRecord {
    Timestamp timestamp{};
    Classification classification;
};

std::vector<ClassifiedRecord> classify_records(std::span<const MetadataRecord> records,
                                               const ProtocolRegistry& registry);

/// Counts per classification label within one period bucket.
struct TimeBucket {
    std::string label;  // "2014" or "2014-03"
    std::map<std::string, std::uint64_t> counts;

    std::uint64_t total() const;
};

/// Buckets cover every period between the first and last record, zeros
/// included; bucket totals sum to the input size.
struct TimeSeriesReport {
    Period period = Period::Year;
    std::vector<TimeBucket> buckets;
    std::uint64_t total = 0;
};

TimeSeriesReport aggregate(std::span<const ClassifiedRecord> records, Period period);

/// Fraction of the corpus per classification label; dark-wallet traffic is
/// its own label, never folded into unattributed.
struct ShareReport {
    std::uint64_t total = 0;
    std::vector<std::pair<std::string, std::uint64_t>> counts;  // label asc
    double share_of(std::string_view label) const;
};

ShareReport share_report(std::span<const ClassifiedRecord> records);

enum class ReportFormat { Csv, Json };

/// Byte-stable rendering. CSV header is `period,protocol,count`; with
/// `plotdata` the output becomes per-verdict (x, y) series over all buckets,
/// zero buckets included.
std::string render_report(const TimeSeriesReport& report, ReportFormat format,
                          bool plotdata = false);
std::string render_share_report(const ShareReport& report, ReportFormat format);

void export_report(const TimeSeriesReport& report, ReportFormat format, bool plotdata,
                   const std::filesystem::path& path);
void export_share_report(const ShareReport& report, ReportFormat format,
                         const std::filesystem::path& path);

}  // namespace metascope
