#include "metascope/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace metascope {

namespace {

using json = nlohmann::json;

/// Months since year 0 for month buckets, the year itself for year buckets.
std::int64_t bucket_index(Timestamp ts, Period period) {
    using namespace std::chrono;
    year_month_day ymd{floor<days>(ts)};
    std::int64_t y = int(ymd.year());
    if (period == Period::Year) return y;
    return y * 12 + static_cast<std::int64_t>(unsigned(ymd.month())) - 1;
}

std::string bucket_label(std::int64_t index, Period period) {
    char buf[16];
    if (period == Period::Year) {
        std::snprintf(buf, sizeof(buf), "%04lld", static_cast<long long>(index));
    } else {
        std::snprintf(buf, sizeof(buf), "%04lld-%02lld", static_cast<long long>(index / 12),
                      static_cast<long long>(index % 12 + 1));
    }
    return buf;
}

std::string format_share(double share) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", share);
    return buf;
}

/// Per-verdict series used by plotdata: attributed, darkwallet, unattributed.
std::map<std::string, std::vector<std::pair<std::string, std::uint64_t>>> verdict_series(
    const TimeSeriesReport& report) {
    std::map<std::string, std::vector<std::pair<std::string, std::uint64_t>>> series;
    for (const char* name : {"attributed", "darkwallet", "unattributed"}) series[name] = {};
    for (const auto& bucket : report.buckets) {
        std::uint64_t darkwallet = 0, unattributed = 0, attributed = 0;
        for (const auto& [label, count] : bucket.counts) {
            if (label == "darkwallet") {
                darkwallet += count;
            } else if (label == "unattributed") {
                unattributed += count;
            } else {
                attributed += count;
            }
        }
        series["attributed"].emplace_back(bucket.label, attributed);
        series["darkwallet"].emplace_back(bucket.label, darkwallet);
        series["unattributed"].emplace_back(bucket.label, unattributed);
    }
    return series;
}

}  // namespace

std::vector<ClassifiedRecord> classify_records(std::span<const MetadataRecord> records,
                                               const ProtocolRegistry& registry) {
    std::vector<ClassifiedRecord> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        out.push_back({rec.timestamp, classify_payload(rec.payload(), registry)});
    }
    return out;
}

std::uint64_t TimeBucket::total() const {
    std::uint64_t sum = 0;
    for (const auto& [label, count] : counts) sum += count;
    return sum;
}

TimeSeriesReport aggregate(std::span<const ClassifiedRecord> records, Period period) {
    TimeSeriesReport report;
    report.period = period;
    report.total = records.size();
    if (records.empty()) return report;

    std::int64_t lo = bucket_index(records.front().timestamp, period);
    std::int64_t hi = lo;
    for (const auto& rec : records) {
        std::int64_t idx = bucket_index(rec.timestamp, period);
        lo = std::min(lo, idx);
        hi = std::max(hi, idx);
    }
    std::map<std::int64_t, TimeBucket> buckets;
    for (std::int64_t i = lo; i <= hi; ++i) buckets[i] = TimeBucket{bucket_label(i, period), {}};
    for (const auto& rec : records) {
        buckets[bucket_index(rec.timestamp, period)].counts[rec.classification.label()] += 1;
    }
    report.buckets.reserve(buckets.size());
    for (auto& [idx, bucket] : buckets) report.buckets.push_back(std::move(bucket));
    return report;
}

double ShareReport::share_of(std::string_view label) const {
    if (total == 0) return 0.0;
    for (const auto& [name, count] : counts) {
        if (name == label) return static_cast<double>(count) / static_cast<double>(total);
    }
    return 0.0;
}

ShareReport share_report(std::span<const ClassifiedRecord> records) {
    ShareReport report;
    report.total = records.size();
    std::map<std::string, std::uint64_t> counts;
    for (const auto& rec : records) counts[rec.classification.label()] += 1;
    report.counts.assign(counts.begin(), counts.end());
    return report;
}

std::string render_report(const TimeSeriesReport& report, ReportFormat format, bool plotdata) {
    if (plotdata) {
        auto series = verdict_series(report);
        if (format == ReportFormat::Csv) {
            std::string out = "series,x,y\n";
            for (const auto& [name, points] : series) {
                for (const auto& [x, y] : points) {
                    out += name + "," + x + "," + std::to_string(y) + "\n";
                }
            }
            return out;
        }
        json doc;
        doc["series"] = json::array();
        for (const auto& [name, points] : series) {
            json s;
            s["name"] = name;
            s["points"] = json::array();
            for (const auto& [x, y] : points) s["points"].push_back({{"x", x}, {"y", y}});
            doc["series"].push_back(std::move(s));
        }
        return doc.dump(2) + "\n";
    }

    if (format == ReportFormat::Csv) {
        std::string out = "period,protocol,count\n";
        for (const auto& bucket : report.buckets) {
            for (const auto& [label, count] : bucket.counts) {
                out += bucket.label + "," + label + "," + std::to_string(count) + "\n";
            }
        }
        return out;
    }
    json rows = json::array();
    for (const auto& bucket : report.buckets) {
        for (const auto& [label, count] : bucket.counts) {
            rows.push_back({{"period", bucket.label}, {"protocol", label}, {"count", count}});
        }
    }
    return rows.dump(2) + "\n";
}

std::string render_share_report(const ShareReport& report, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out = "protocol,count,share\n";
        for (const auto& [label, count] : report.counts) {
            out += label + "," + std::to_string(count) + "," +
                   format_share(report.share_of(label)) + "\n";
        }
        return out;
    }
    json rows = json::array();
    for (const auto& [label, count] : report.counts) {
        rows.push_back(
            {{"protocol", label}, {"count", count}, {"share", report.share_of(label)}});
    }
    return rows.dump(2) + "\n";
}

namespace {

void write_file(const std::string& content, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write report file: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void export_report(const TimeSeriesReport& report, ReportFormat format, bool plotdata,
                   const std::filesystem::path& path) {
    write_file(render_report(report, format, plotdata), path);
}

void export_share_report(const ShareReport& report, ReportFormat format,
                         const std::filesystem::path& path) {
    write_file(render_share_report(report, format), path);
}

}  // namespace metascope
