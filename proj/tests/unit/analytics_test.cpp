#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "metascope/analytics.hpp"
#include "support/corpus_gen.hpp"

using namespace metascope;

namespace {

ClassifiedRecord at(const char* ts, Classification cls) {
    return {parse_rfc3339(ts), std::move(cls)};
}

const Classification kUnattributed{Verdict::Unattributed, ""};
const Classification kDark{Verdict::DarkWallet, ""};

const std::filesystem::path kDataDir = METASCOPE_DATA_DIR;

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("yearly aggregation counts per bucket") {
    std::vector<ClassifiedRecord> records = {
        at("2013-04-01T00:00:00Z", kUnattributed),
        at("2013-07-01T00:00:00Z", kUnattributed),
        at("2013-12-31T23:59:59Z", kUnattributed),
        at("2014-01-01T00:00:00Z", kUnattributed),
        at("2014-03-01T00:00:00Z", kUnattributed),
        at("2014-05-01T00:00:00Z", kUnattributed),
        at("2014-07-01T00:00:00Z", kUnattributed),
        at("2014-09-01T00:00:00Z", kUnattributed),
    };
    TimeSeriesReport report = aggregate(records, Period::Year);
    REQUIRE(report.buckets.size() == 2);
    CHECK(report.buckets[0].label == "2013");
    CHECK(report.buckets[0].total() == 3);
    CHECK(report.buckets[1].label == "2014");
    CHECK(report.buckets[1].total() == 5);
    CHECK(report.total == 8);
}

TEST_CASE("empty input gives an empty report") {
    TimeSeriesReport report = aggregate({}, Period::Year);
    CHECK(report.buckets.empty());
    CHECK(report.total == 0);
}

TEST_CASE("gap periods appear as zero buckets") {
    std::vector<ClassifiedRecord> records = {
        at("2013-06-01T00:00:00Z", kUnattributed),
        at("2016-06-01T00:00:00Z", kDark),
    };
    TimeSeriesReport yearly = aggregate(records, Period::Year);
    REQUIRE(yearly.buckets.size() == 4);
    CHECK(yearly.buckets[0].label == "2013");
    CHECK(yearly.buckets[1].label == "2014");
    CHECK(yearly.buckets[1].total() == 0);
    CHECK(yearly.buckets[2].total() == 0);
    CHECK(yearly.buckets[3].label == "2016");

    std::vector<ClassifiedRecord> monthly_records = {
        at("2013-11-15T00:00:00Z", kUnattributed),
        at("2014-02-15T00:00:00Z", kUnattributed),
    };
    TimeSeriesReport monthly = aggregate(monthly_records, Period::Month);
    REQUIRE(monthly.buckets.size() == 4);
    CHECK(monthly.buckets[0].label == "2013-11");
    CHECK(monthly.buckets[1].label == "2013-12");
    CHECK(monthly.buckets[2].label == "2014-01");
    CHECK(monthly.buckets[3].label == "2014-02");
}

TEST_CASE("labels separate protocols, dark-wallet, and unattributed") {
    std::vector<ClassifiedRecord> records = {
        at("2015-01-01T00:00:00Z", {Verdict::Attributed, "Factom"}),
        at("2015-02-01T00:00:00Z", {Verdict::Attributed, "Factom"}),
        at("2015-03-01T00:00:00Z", kDark),
        at("2015-04-01T00:00:00Z", kUnattributed),
    };
    TimeSeriesReport report = aggregate(records, Period::Year);
    REQUIRE(report.buckets.size() == 1);
    const auto& counts = report.buckets[0].counts;
    CHECK(counts.at("Factom") == 2);
    CHECK(counts.at("darkwallet") == 1);
    CHECK(counts.at("unattributed") == 1);
}

TEST_CASE("conservation: bucket totals always sum to the input size") {
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 100; ++trial) {
        auto records = corpusgen::random_classified_records(rng, rng() % 500);
        for (Period period : {Period::Year, Period::Month}) {
            TimeSeriesReport report = aggregate(records, period);
            std::uint64_t sum = 0;
            for (const auto& bucket : report.buckets) sum += bucket.total();
            CHECK(sum == records.size());
            CHECK(report.total == records.size());
        }
    }
}

TEST_CASE("share report recovers proportions and sums to one") {
    std::mt19937_64 rng(51);
    auto corpus = corpusgen::make_protocol_mix_corpus(rng, 2000);
    std::vector<ClassifiedRecord> records;
    Timestamp ts = parse_rfc3339("2016-01-01T00:00:00Z");
    for (const auto& item : corpus.items) {
        records.push_back({ts, classify_payload(item.payload, corpus.registry)});
    }
    ShareReport report = share_report(records);
    CHECK(report.total == 2000);

    double sum = 0;
    for (const auto& [label, count] : report.counts) {
        CHECK(count == corpus.truth_counts.at(label));
        sum += report.share_of(label);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("share report edge cases") {
    std::vector<ClassifiedRecord> all_dark = {
        at("2015-01-01T00:00:00Z", kDark),
        at("2015-01-02T00:00:00Z", kDark),
    };
    ShareReport dark = share_report(all_dark);
    CHECK(dark.share_of("darkwallet") == doctest::Approx(1.0));

    std::vector<ClassifiedRecord> one = {at("2015-01-01T00:00:00Z", {Verdict::Attributed, "Colu"})};
    CHECK(share_report(one).share_of("Colu") == doctest::Approx(1.0));

    ShareReport empty = share_report({});
    CHECK(empty.total == 0);
    CHECK(empty.counts.empty());
}

TEST_CASE("csv rendering is byte-stable with the pinned header") {
    std::vector<ClassifiedRecord> records = {
        at("2013-04-01T00:00:00Z", kUnattributed),
        at("2014-04-01T00:00:00Z", {Verdict::Attributed, "Factom"}),
    };
    TimeSeriesReport report = aggregate(records, Period::Year);
    std::string csv = render_report(report, ReportFormat::Csv);
    CHECK(csv.rfind("period,protocol,count\n", 0) == 0);
    CHECK(csv == render_report(report, ReportFormat::Csv));
    CHECK(csv.find("2013,unattributed,1\n") != std::string::npos);
    CHECK(csv.find("2014,Factom,1\n") != std::string::npos);

    std::string share_csv = render_share_report(share_report(records), ReportFormat::Csv);
    CHECK(share_csv.rfind("protocol,count,share\n", 0) == 0);
    CHECK(share_csv.find("Factom,1,0.500000000") != std::string::npos);
}

TEST_CASE("json rendering mirrors the csv fields") {
    std::vector<ClassifiedRecord> records = {
        at("2013-04-01T00:00:00Z", kUnattributed),
    };
    TimeSeriesReport report = aggregate(records, Period::Year);
    auto doc = nlohmann::json::parse(render_report(report, ReportFormat::Json));
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["period"] == "2013");
    CHECK(doc[0]["protocol"] == "unattributed");
    CHECK(doc[0]["count"] == 1);

    auto share_doc = nlohmann::json::parse(
        render_share_report(share_report(records), ReportFormat::Json));
    REQUIRE(share_doc.is_array());
    CHECK(share_doc[0]["protocol"] == "unattributed");
    CHECK(share_doc[0]["count"] == 1);
}

TEST_CASE("plotdata emits one series per verdict with strictly increasing x") {
    std::vector<ClassifiedRecord> records = {
        at("2013-04-01T00:00:00Z", kUnattributed),
        at("2014-04-01T00:00:00Z", kDark),
        at("2016-01-01T00:00:00Z", {Verdict::Attributed, "Colu"}),
    };
    TimeSeriesReport report = aggregate(records, Period::Year);
    std::string csv = render_report(report, ReportFormat::Csv, true);
    CHECK(csv.rfind("series,x,y\n", 0) == 0);

    auto doc = nlohmann::json::parse(render_report(report, ReportFormat::Json, true));
    REQUIRE(doc.contains("series"));
    REQUIRE(doc["series"].size() == 3);
    for (const auto& series : doc["series"]) {
        std::string prev;
        REQUIRE(series["points"].size() == 4);  // 2013..2016, zeros included
        for (const auto& point : series["points"]) {
            std::string x = point["x"].get<std::string>();
            CHECK(x > prev);
            prev = x;
        }
    }
}

TEST_CASE("export writes identical bytes on repeated runs") {
    std::vector<ClassifiedRecord> records = {
        at("2013-04-01T00:00:00Z", kUnattributed),
    };
    TimeSeriesReport report = aggregate(records, Period::Year);
    auto path = std::filesystem::temp_directory_path() / "metascope-test-export.csv";
    export_report(report, ReportFormat::Csv, false, path);
    std::ifstream first(path);
    std::string content1((std::istreambuf_iterator<char>(first)), {});
    export_report(report, ReportFormat::Csv, false, path);
    std::ifstream second(path);
    std::string content2((std::istreambuf_iterator<char>(second)), {});
    CHECK(content1 == content2);
    std::filesystem::remove(path);
}

TEST_CASE("the shipped 2013 sample aggregates to a single unattributed bucket") {
    auto records = read_corpus(kDataDir / "sample-2013.csv");
    REQUIRE(records.size() == 430);
    ProtocolRegistry registry = load_registry(kDataDir / "registry.csv");
    auto classified = classify_records(records, registry);
    TimeSeriesReport report = aggregate(classified, Period::Year);
    REQUIRE(report.buckets.size() == 1);
    CHECK(report.buckets[0].label == "2013");
    CHECK(report.buckets[0].total() == 430);
    CHECK(report.buckets[0].counts.at("unattributed") == 430);
}

}  // TEST_SUITE
