#include "metascope/datasource.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace metascope {

namespace {

using json = nlohmann::json;

std::string fill_template(std::string tpl, std::uint64_t from, std::uint64_t to,
                          std::uint64_t page) {
    auto replace_all = [](std::string& s, std::string_view key, const std::string& value) {
        for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos)) {
            s.replace(pos, key.size(), value);
            pos += value.size();
        }
    };
    replace_all(tpl, "{from}", std::to_string(from));
    replace_all(tpl, "{to}", std::to_string(to));
    replace_all(tpl, "{page}", std::to_string(page));
    return tpl;
}

MetadataRecord record_from_json(const json& item, const ResponseFields& fields) {
    MetadataRecord rec;
    try {
        const json& ts = item.at(fields.timestamp);
        if (ts.is_number_integer()) {
            rec.timestamp = Timestamp{std::chrono::seconds{ts.get<std::int64_t>()}};
        } else {
            rec.timestamp = parse_rfc3339(ts.get<std::string>());
        }
        rec.block_height = item.at(fields.block).get<std::uint64_t>();
        rec.txid = Txid::from_hex(item.at(fields.txid).get<std::string>());
        rec.script = from_hex(item.at(fields.script).get<std::string>());
    } catch (const json::exception& e) {
        throw MalformedResponse(std::string("record field error: ") + e.what());
    } catch (const Error& e) {
        throw MalformedResponse(std::string("record field error: ") + e.what());
    }
    if (rec.script.empty() || rec.script[0] != 0x6a) {
        throw MalformedResponse("record script does not start with OP_RETURN");
    }
    auto payload = try_payload_from_script(rec.script, TxRef{rec.txid, 0});
    if (!payload) throw MalformedResponse("record script does not decode");
    rec.ascii = decode_ascii(*payload);
    return rec;
}

json parse_body(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw MalformedResponse("response is not valid JSON");
    return doc;
}

}  // namespace

FileDataSource::FileDataSource(const std::filesystem::path& corpus_path)
    : records_(read_corpus(corpus_path)) {
    std::stable_sort(records_.begin(), records_.end(),
                     [](const auto& a, const auto& b) { return a.block_height < b.block_height; });
}

FileDataSource::FileDataSource(std::vector<MetadataRecord> records)
    : records_(std::move(records)) {
    std::stable_sort(records_.begin(), records_.end(),
                     [](const auto& a, const auto& b) { return a.block_height < b.block_height; });
}

std::uint64_t FileDataSource::latest_block() {
    return records_.empty() ? 0 : records_.back().block_height;
}

std::vector<MetadataRecord> FileDataSource::fetch_range(std::uint64_t from_block,
                                                        std::uint64_t to_block) {
    if (from_block > to_block) throw InvalidArgument("from_block > to_block");
    std::vector<MetadataRecord> out;
    for (const auto& rec : records_) {
        if (rec.block_height >= from_block && rec.block_height <= to_block) out.push_back(rec);
    }
    return out;
}

HttpTransport make_httplib_transport(const HttpSourceConfig& config) {
    std::string base_url = config.base_url;
    std::string auth_header = config.auth_header;
    std::string auth_value = config.auth_value;
    return [base_url, auth_header, auth_value](const std::string& path) -> HttpResponse {
        httplib::Client client(base_url);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(30, 0);
        httplib::Headers headers;
        if (!auth_header.empty()) headers.emplace(auth_header, auth_value);
        auto result = client.Get(path, headers);
        if (!result) return {false, 0, "", httplib::to_string(result.error())};
        return {true, result->status, result->body, ""};
    };
}

HttpDataSource::HttpDataSource(HttpSourceConfig config)
    : HttpDataSource(config, make_httplib_transport(config)) {}

HttpDataSource::HttpDataSource(HttpSourceConfig config, HttpTransport transport, SleepFn sleep)
    : config_(std::move(config)), transport_(std::move(transport)), sleep_(std::move(sleep)) {
    if (!sleep_) {
        sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
}

void HttpDataSource::rate_limit_wait() {
    if (config_.rate_limit_per_sec <= 0) return;
    auto interval =
        std::chrono::milliseconds(static_cast<long>(1000.0 / config_.rate_limit_per_sec));
    auto now = std::chrono::steady_clock::now();
    if (last_request_.time_since_epoch().count() > 0) {
        auto next_allowed = last_request_ + interval;
        if (now < next_allowed) {
            sleep_(std::chrono::duration_cast<std::chrono::milliseconds>(next_allowed - now));
        }
    }
    last_request_ = std::chrono::steady_clock::now();
}

std::string HttpDataSource::get_with_retry(const std::string& path) {
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retry.max_retries; ++attempt) {
        if (attempt > 0) {
            double scale = 1.0;
            for (int i = 1; i < attempt; ++i) scale *= config_.retry.backoff_factor;
            auto delay = std::chrono::milliseconds(
                static_cast<long>(static_cast<double>(config_.retry.backoff_base.count()) *
                                  scale));
            ++stats_.retries;
            if (on_retry) {
                on_retry("retry " + std::to_string(attempt) + " for " + path + " after " +
                         last_error);
            }
            sleep_(delay);
        }
        rate_limit_wait();
        HttpResponse resp = transport_(path);
        ++stats_.requests;
        if (!resp.ok) {
            last_error = resp.error.empty() ? "transport error" : resp.error;
            continue;
        }
        if (resp.status == 200) return resp.body;
        if (resp.status == 413 || resp.status == 416) {
            throw RangeTooLarge("source rejected range: HTTP " + std::to_string(resp.status));
        }
        if (resp.status == 429 || resp.status >= 500) {
            last_error = "HTTP " + std::to_string(resp.status);
            continue;
        }
        throw SourceUnreachable("HTTP " + std::to_string(resp.status) + " for " + path);
    }
    throw SourceUnreachable("gave up after " + std::to_string(config_.retry.max_retries) +
                            " retries: " + last_error);
}

std::uint64_t HttpDataSource::latest_block() {
    json doc = parse_body(get_with_retry(config_.latest_path));
    if (!doc.contains(config_.fields.latest) ||
        !doc[config_.fields.latest].is_number_unsigned()) {
        throw MalformedResponse("missing or non-numeric field '" + config_.fields.latest + "'");
    }
    return doc[config_.fields.latest].get<std::uint64_t>();
}

std::vector<MetadataRecord> HttpDataSource::fetch_range(std::uint64_t from_block,
                                                        std::uint64_t to_block) {
    if (from_block > to_block) throw InvalidArgument("from_block > to_block");
    if (config_.max_range > 0 && to_block - from_block + 1 > config_.max_range) {
        throw RangeTooLarge("range spans " + std::to_string(to_block - from_block + 1) +
                            " blocks, source cap is " + std::to_string(config_.max_range));
    }

    bool paginated = config_.range_path.find("{page}") != std::string::npos;
    std::vector<MetadataRecord> records;
    std::uint64_t page = config_.page_start;
    while (true) {
        std::string path = fill_template(config_.range_path, from_block, to_block, page);
        json doc = parse_body(get_with_retry(path));
        if (!doc.contains(config_.fields.records) || !doc[config_.fields.records].is_array()) {
            throw MalformedResponse("missing array field '" + config_.fields.records + "'");
        }
        const json& items = doc[config_.fields.records];
        if (items.empty()) break;
        ++stats_.pages;
        for (const auto& item : items) records.push_back(record_from_json(item, config_.fields));
        if (!paginated) break;
        ++page;
    }

    // Normalize: the contract is non-decreasing block order within the range,
    // whatever the source handed back.
    std::stable_sort(records.begin(), records.end(),
                     [](const auto& a, const auto& b) { return a.block_height < b.block_height; });
    std::erase_if(records, [&](const MetadataRecord& rec) {
        return rec.block_height < from_block || rec.block_height > to_block;
    });
    return records;
}

}  // namespace metascope
