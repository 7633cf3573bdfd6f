#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "metascope/corpus.hpp"

namespace metascope {

/// Source of OP_RETURN metadata records. Implementations must yield records
/// in non-decreasing block order.
class DataSource {
public:
    virtual ~DataSource() = default;

    virtual std::uint64_t latest_block() = 0;

    /// All records with from_block <= height <= to_block.
    /// Throws InvalidArgument when from_block > to_block.
    virtual std::vector<MetadataRecord> fetch_range(std::uint64_t from_block,
                                                    std::uint64_t to_block) = 0;
};

/// Corpus file standing in for a remote explorer.
class FileDataSource : public DataSource {
public:
    explicit FileDataSource(const std::filesystem::path& corpus_path);
    explicit FileDataSource(std::vector<MetadataRecord> records);

    std::uint64_t latest_block() override;
    std::vector<MetadataRecord> fetch_range(std::uint64_t from_block,
                                            std::uint64_t to_block) override;

private:
    std::vector<MetadataRecord> records_;
};

struct RetryPolicy {
    int max_retries = 5;
    std::chrono::milliseconds backoff_base{500};
    double backoff_factor = 2.0;
};

/// JSON field names in explorer responses; endpoint-specific, so data.
struct ResponseFields {
    std::string records = "records";
    std::string timestamp = "time";
    std::string block = "block";
    std::string txid = "txid";
    std::string script = "script";
    std::string latest = "height";
};

struct HttpSourceConfig {
    std::string base_url;                 // e.g. "http://127.0.0.1:8080"
    std::string latest_path = "/latest";  // GET path for the best height
    /// Range query template; `{from}`, `{to}` and `{page}` are substituted.
    /// Without `{page}` the source is treated as non-paginated.
    std::string range_path = "/opreturn?from={from}&to={to}&page={page}";
    std::string auth_header;
    std::string auth_value;
    double rate_limit_per_sec = 1.0;  // 0 disables the limiter
    RetryPolicy retry;
    std::uint64_t page_start = 0;
    std::uint64_t max_range = 0;  // 0 = no client-side cap
    ResponseFields fields;
};

struct HttpResponse {
    bool ok = false;  // transport-level success (a response was received)
    int status = 0;
    std::string body;
    std::string error;
};

using HttpTransport = std::function<HttpResponse(const std::string& path)>;
using SleepFn = std::function<void(std::chrono::milliseconds)>;

HttpTransport make_httplib_transport(const HttpSourceConfig& config);

/// Explorer client: bounded retry with exponential backoff, request rate
/// limiting, page walking, and block-order normalization.
class HttpDataSource : public DataSource {
public:
    explicit HttpDataSource(HttpSourceConfig config);
    HttpDataSource(HttpSourceConfig config, HttpTransport transport, SleepFn sleep = {});

    std::uint64_t latest_block() override;
    std::vector<MetadataRecord> fetch_range(std::uint64_t from_block,
                                            std::uint64_t to_block) override;

    struct Stats {
        std::uint64_t requests = 0;
        std::uint64_t retries = 0;
        std::uint64_t pages = 0;
    };
    const Stats& stats() const { return stats_; }

    /// Invoked once per retry with a human-readable reason.
    std::function<void(const std::string&)> on_retry;

private:
    std::string get_with_retry(const std::string& path);
    void rate_limit_wait();

    HttpSourceConfig config_;
    HttpTransport transport_;
    SleepFn sleep_;
    Stats stats_;
    std::chrono::steady_clock::time_point last_request_{};
};

}  // namespace metascope
