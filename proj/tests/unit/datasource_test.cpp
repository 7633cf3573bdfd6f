#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "metascope/config.hpp"
#include "metascope/datasource.hpp"

using namespace metascope;
using json = nlohmann::json;

namespace {

MetadataRecord record_at(std::uint64_t block, const char* data_hex = "aa") {
    MetadataRecord rec;
    rec.timestamp = parse_rfc3339("2015-01-01T00:00:00Z");
    rec.block_height = block;
    rec.txid = Txid::from_hex(
        "4a5e1e4baab89f3a32518a88c31bc87f618f76673e2cc77ab2127b7afdeda33b");
    Bytes data = from_hex(data_hex);
    rec.script = {0x6a, static_cast<std::uint8_t>(data.size())};
    rec.script.insert(rec.script.end(), data.begin(), data.end());
    rec.ascii = decode_ascii(data);
    return rec;
}

json record_json(std::uint64_t block) {
    return {{"time", "2015-01-01T00:00:00Z"},
            {"block", block},
            {"txid", "4a5e1e4baab89f3a32518a88c31bc87f618f76673e2cc77ab2127b7afdeda33b"},
            {"script", "6a01aa"}};
}

HttpSourceConfig test_config() {
    HttpSourceConfig cfg;
    cfg.base_url = "http://mock";
    cfg.rate_limit_per_sec = 0;  // tests never sleep
    cfg.retry.backoff_base = std::chrono::milliseconds(100);
    return cfg;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const char* name)
        : path(std::filesystem::temp_directory_path() /
               (std::string("metascope-test-") + std::to_string(::getpid()) + "-" + name)) {}
    ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_SUITE("datasource") {

TEST_CASE("file source answers latest and range queries") {
    FileDataSource source({record_at(100), record_at(105), record_at(103)});
    CHECK(source.latest_block() == 105);
    auto range = source.fetch_range(101, 104);
    REQUIRE(range.size() == 1);
    CHECK(range[0].block_height == 103);
    CHECK(source.fetch_range(1, 99).empty());
    CHECK(source.fetch_range(100, 105).size() == 3);
    CHECK_THROWS_AS(source.fetch_range(10, 9), InvalidArgument);
}

TEST_CASE("empty file source reports height zero") {
    FileDataSource source(std::vector<MetadataRecord>{});
    CHECK(source.latest_block() == 0);
}

TEST_CASE("mocked source returns records in order") {
    auto transport = [](const std::string&) -> HttpResponse {
        json body = {{"records", {record_json(10), record_json(11), record_json(11)}}};
        return {true, 200, body.dump(), ""};
    };
    HttpSourceConfig cfg = test_config();
    cfg.range_path = "/opreturn?from={from}&to={to}";  // non-paginated
    HttpDataSource source(cfg, transport);
    auto records = source.fetch_range(10, 12);
    REQUIRE(records.size() == 3);
    CHECK(records[0].block_height == 10);
    CHECK(records[2].block_height == 11);
    CHECK(source.stats().requests == 1);
}

TEST_CASE("pagination walks pages until an empty one and keeps block order") {
    std::vector<std::string> paths_seen;
    auto transport = [&paths_seen](const std::string& path) -> HttpResponse {
        paths_seen.push_back(path);
        json body;
        if (path.find("page=0") != std::string::npos) {
            body = {{"records", {record_json(10), record_json(11)}}};
        } else if (path.find("page=1") != std::string::npos) {
            body = {{"records", {record_json(12), record_json(13)}}};
        } else if (path.find("page=2") != std::string::npos) {
            body = {{"records", {record_json(14)}}};
        } else {
            body = {{"records", json::array()}};
        }
        return {true, 200, body.dump(), ""};
    };
    HttpDataSource source(test_config(), transport);
    auto records = source.fetch_range(10, 20);
    REQUIRE(records.size() == 5);
    for (std::size_t i = 1; i < records.size(); ++i) {
        CHECK(records[i - 1].block_height <= records[i].block_height);
    }
    CHECK(source.stats().pages == 3);
    CHECK(source.stats().requests == 4);
    REQUIRE(paths_seen.size() == 4);
    CHECK(paths_seen[0] == "/opreturn?from=10&to=20&page=0");
    CHECK(paths_seen[3] == "/opreturn?from=10&to=20&page=3");
}

TEST_CASE("out-of-order pages are normalized to block order") {
    auto transport = [](const std::string& path) -> HttpResponse {
        json body;
        if (path.find("page=0") != std::string::npos) {
            body = {{"records", {record_json(14), record_json(12)}}};
        } else if (path.find("page=1") != std::string::npos) {
            body = {{"records", {record_json(13), record_json(10)}}};
        } else {
            body = {{"records", json::array()}};
        }
        return {true, 200, body.dump(), ""};
    };
    HttpDataSource source(test_config(), transport);
    auto records = source.fetch_range(10, 20);
    REQUIRE(records.size() == 4);
    for (std::size_t i = 1; i < records.size(); ++i) {
        CHECK(records[i - 1].block_height <= records[i].block_height);
    }
}

TEST_CASE("records outside the requested range are dropped") {
    auto transport = [](const std::string&) -> HttpResponse {
        json body = {{"records", {record_json(5), record_json(10), record_json(25)}}};
        return {true, 200, body.dump(), ""};
    };
    HttpSourceConfig cfg = test_config();
    cfg.range_path = "/r?from={from}&to={to}";
    HttpDataSource source(cfg, transport);
    auto records = source.fetch_range(10, 20);
    REQUIRE(records.size() == 1);
    CHECK(records[0].block_height == 10);
}

TEST_CASE("two failures then success: retried with exponential backoff") {
    int calls = 0;
    auto transport = [&calls](const std::string&) -> HttpResponse {
        ++calls;
        if (calls <= 2) return {false, 0, "", "connection refused"};
        json body = {{"height", 474451}};
        return {true, 200, body.dump(), ""};
    };
    std::vector<std::chrono::milliseconds> sleeps;
    auto sleep_spy = [&sleeps](std::chrono::milliseconds d) { sleeps.push_back(d); };

    HttpDataSource source(test_config(), transport, sleep_spy);
    int retry_events = 0;
    source.on_retry = [&retry_events](const std::string&) { ++retry_events; };

    CHECK(source.latest_block() == 474451);
    CHECK(retry_events == 2);
    CHECK(source.stats().retries == 2);
    CHECK(source.stats().requests == 3);
    REQUIRE(sleeps.size() == 2);
    CHECK(sleeps[0] == std::chrono::milliseconds(100));
    CHECK(sleeps[1] == std::chrono::milliseconds(200));
}

TEST_CASE("a source that keeps failing becomes SourceUnreachable after the retry budget") {
    int calls = 0;
    auto transport = [&calls](const std::string&) -> HttpResponse {
        ++calls;
        return {true, 503, "", ""};
    };
    HttpSourceConfig cfg = test_config();
    cfg.retry.max_retries = 3;
    HttpDataSource source(cfg, transport, [](std::chrono::milliseconds) {});
    CHECK_THROWS_AS(source.latest_block(), SourceUnreachable);
    CHECK(calls == 4);  // initial try + 3 retries
}

TEST_CASE("client-side and server-side range caps raise RangeTooLarge") {
    int calls = 0;
    auto transport = [&calls](const std::string&) -> HttpResponse {
        ++calls;
        return {true, 413, "", ""};
    };
    HttpSourceConfig cfg = test_config();
    cfg.max_range = 100;
    HttpDataSource source(cfg, transport);
    CHECK_THROWS_AS(source.fetch_range(0, 1000), RangeTooLarge);
    CHECK(calls == 0);  // rejected before any request

    CHECK_THROWS_AS(source.fetch_range(0, 50), RangeTooLarge);  // server says 413
    CHECK(calls == 1);
}

TEST_CASE("non-retryable statuses fail immediately") {
    int calls = 0;
    auto transport = [&calls](const std::string&) -> HttpResponse {
        ++calls;
        return {true, 404, "", ""};
    };
    HttpDataSource source(test_config(), transport);
    CHECK_THROWS_AS(source.latest_block(), SourceUnreachable);
    CHECK(calls == 1);
}

TEST_CASE("malformed responses are surfaced as MalformedResponse") {
    auto not_json = [](const std::string&) -> HttpResponse {
        return {true, 200, "<html>oops</html>", ""};
    };
    HttpDataSource a(test_config(), not_json);
    CHECK_THROWS_AS(a.latest_block(), MalformedResponse);

    auto missing_field = [](const std::string&) -> HttpResponse {
        return {true, 200, R"({"tip": 1})", ""};
    };
    HttpDataSource b(test_config(), missing_field);
    CHECK_THROWS_AS(b.latest_block(), MalformedResponse);

    auto bad_record = [](const std::string&) -> HttpResponse {
        json body = {{"records", {{{"time", "2015-01-01T00:00:00Z"}, {"block", 1}}}}};
        return {true, 200, body.dump(), ""};
    };
    HttpDataSource c(test_config(), bad_record);
    CHECK_THROWS_AS(c.fetch_range(0, 10), MalformedResponse);

    auto non_opreturn_script = [](const std::string&) -> HttpResponse {
        json rec = record_json(10);
        rec["script"] = "76a9";
        json body = {{"records", {rec}}};
        return {true, 200, body.dump(), ""};
    };
    HttpDataSource d(test_config(), non_opreturn_script);
    CHECK_THROWS_AS(d.fetch_range(0, 100), MalformedResponse);
}

TEST_CASE("epoch timestamps are accepted in responses") {
    auto transport = [](const std::string&) -> HttpResponse {
        json rec = record_json(10);
        rec["time"] = 1420070400;  // 2015-01-01T00:00:00Z
        json body = {{"records", {rec}}};
        return {true, 200, body.dump(), ""};
    };
    HttpSourceConfig cfg = test_config();
    cfg.range_path = "/r?from={from}&to={to}";
    HttpDataSource source(cfg, transport);
    auto records = source.fetch_range(0, 100);
    REQUIRE(records.size() == 1);
    CHECK(format_rfc3339(records[0].timestamp) == "2015-01-01T00:00:00Z");
}

TEST_CASE("latest_block on an append-only mock never decreases") {
    std::uint64_t height = 474000;
    auto transport = [&height](const std::string&) -> HttpResponse {
        json body = {{"height", height}};
        height += 1;
        return {true, 200, body.dump(), ""};
    };
    HttpDataSource source(test_config(), transport);
    std::uint64_t first = source.latest_block();
    std::uint64_t second = source.latest_block();
    CHECK(second >= first);
}

TEST_CASE("precondition: from_block must not exceed to_block") {
    HttpDataSource source(test_config(), [](const std::string&) -> HttpResponse {
        return {true, 200, "{}", ""};
    });
    CHECK_THROWS_AS(source.fetch_range(5, 4), InvalidArgument);
}

TEST_CASE("config files populate the http source settings") {
    TempFile file("config.json");
    {
        std::ofstream out(file.path);
        out << R"({
  "registry": "data/registry.csv",
  "profiles": "data/profiles.csv",
  "default_profile": "btc",
  "dataset": {"from_block": 228596, "to_block": 474451},
  "source": {
    "base_url": "http://127.0.0.1:9999",
    "latest_path": "/api/latest",
    "range_path": "/api/opreturn?from={from}&to={to}&page={page}",
    "auth_header": "X-Api-Key",
    "auth_value": "secret",
    "rate_limit_per_sec": 2.5,
    "page_start": 1,
    "max_range": 50000,
    "retry": {"max_retries": 4, "backoff_base_ms": 250, "backoff_factor": 3.0},
    "fields": {"records": "rows", "timestamp": "ts", "latest": "tip"}
  }
})";
    }
    Config config = load_config(file.path);
    CHECK(config.registry_path == "data/registry.csv");
    CHECK(config.dataset_from_block == 228596);
    CHECK(config.dataset_to_block == 474451);
    CHECK(config.source.base_url == "http://127.0.0.1:9999");
    CHECK(config.source.auth_header == "X-Api-Key");
    CHECK(config.source.rate_limit_per_sec == doctest::Approx(2.5));
    CHECK(config.source.page_start == 1);
    CHECK(config.source.max_range == 50000);
    CHECK(config.source.retry.max_retries == 4);
    CHECK(config.source.retry.backoff_base.count() == 250);
    CHECK(config.source.retry.backoff_factor == doctest::Approx(3.0));
    CHECK(config.source.fields.records == "rows");
    CHECK(config.source.fields.timestamp == "ts");
    CHECK(config.source.fields.latest == "tip");
    CHECK(config.source.fields.block == "block");  // untouched default

    // Field names flow through to response parsing.
    auto transport = [](const std::string&) -> HttpResponse {
        json body = {{"tip", 300000}};
        return {true, 200, body.dump(), ""};
    };
    HttpSourceConfig src = config.source;
    src.rate_limit_per_sec = 0;
    HttpDataSource source(src, transport);
    CHECK(source.latest_block() == 300000);
}

TEST_CASE("config errors are reported") {
    TempFile file("bad-config.json");
    {
        std::ofstream out(file.path);
        out << "{not json";
    }
    CHECK_THROWS_AS(load_config(file.path), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/metascope.json"), ConfigError);
}

TEST_CASE("the stock transport pulls pages from a live loopback server") {
    httplib::Server server;
    std::string seen_auth;
    server.Get("/latest", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"height": 474451})", "application/json");
    });
    server.Get("/opreturn", [&seen_auth](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("X-Api-Key");
        int page = std::stoi(req.get_param_value("page"));
        json body;
        if (page == 0) {
            body = {{"records", {record_json(10), record_json(11)}}};
        } else if (page == 1) {
            body = {{"records", {record_json(12)}}};
        } else {
            body = {{"records", json::array()}};
        }
        res.set_content(body.dump(), "application/json");
    });

    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread listener([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpSourceConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.latest_path = "/latest";
    cfg.range_path = "/opreturn?from={from}&to={to}&page={page}";
    cfg.auth_header = "X-Api-Key";
    cfg.auth_value = "hunter2";
    cfg.rate_limit_per_sec = 0;
    HttpDataSource source(cfg);

    CHECK(source.latest_block() == 474451);
    auto records = source.fetch_range(10, 20);
    REQUIRE(records.size() == 3);
    CHECK(records[0].block_height == 10);
    CHECK(records[2].block_height == 12);
    CHECK(seen_auth == "hunter2");

    server.stop();
    listener.join();
}

}  // TEST_SUITE
