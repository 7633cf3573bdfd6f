#include "metascope/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "metascope/analytics.hpp"
#include "metascope/config.hpp"
#include "metascope/corpus.hpp"
#include "metascope/datasource.hpp"
#include "metascope/hash.hpp"
#include "metascope/opreturn.hpp"
#include "metascope/registry.hpp"
#include "metascope/script.hpp"
#include "metascope/stealth.hpp"
#include "metascope/tx.hpp"

namespace metascope::cli {

namespace {

using json = nlohmann::json;

struct UsageError : Error {
    using Error::Error;
};

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Accepts a hex string (whitespace tolerated) or raw binary file content.
Bytes bytes_from_file(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    std::string stripped;
    stripped.reserve(text.size());
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) stripped.push_back(c);
    }
    if (auto bytes = try_from_hex(stripped)) return std::move(*bytes);
    return Bytes(text.begin(), text.end());
}

void write_output(const std::string& content, const std::optional<std::string>& out_path,
                  std::ostream& out) {
    if (!out_path) {
        out << content;
        return;
    }
    std::ofstream file(*out_path, std::ios::trunc | std::ios::binary);
    if (!file) throw IoError("cannot write: " + *out_path);
    file << content;
    if (!file) throw IoError("write failed: " + *out_path);
}

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw UsageError("unknown format: " + name);
}

std::string resolve_registry_path(const std::optional<std::string>& flag, const Config& config) {
    if (flag) return *flag;
    if (!config.registry_path.empty()) return config.registry_path;
    throw UsageError("no registry file: pass --registry or set it in the config");
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

json tx_to_json(const Transaction& tx) {
    json doc;
    doc["txid"] = tx.txid().hex();
    doc["version"] = tx.version;
    doc["locktime"] = tx.locktime;
    doc["inputs"] = json::array();
    for (const auto& input : tx.inputs) {
        doc["inputs"].push_back({{"prev_txid", input.prev_txid.hex()},
                                 {"prev_index", input.prev_index},
                                 {"script_hex", to_hex(input.unlocking_script.raw)},
                                 {"sequence", input.sequence}});
    }
    doc["outputs"] = json::array();
    for (const auto& output : tx.outputs) {
        doc["outputs"].push_back(
            {{"value", output.value},
             {"script_hex", to_hex(output.locking_script.raw)},
             {"type", to_string(classify_script_type(output.locking_script))}});
    }
    return doc;
}

struct CommonArgs {
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;

    Config config() const {
        std::optional<std::filesystem::path> p;
        if (config_path) p = *config_path;
        return resolve_config(p);
    }
};

Bytes tx_bytes_from_args(const std::optional<std::string>& tx_hex,
                         const std::optional<std::string>& file) {
    if (tx_hex && file) throw UsageError("--tx and --file are mutually exclusive");
    if (tx_hex) {
        auto bytes = try_from_hex(*tx_hex);
        if (!bytes) throw UsageError("--tx is not valid hex");
        return std::move(*bytes);
    }
    if (file) return bytes_from_file(*file);
    throw UsageError("need --tx HEX or --file PATH");
}

int run_parse(const CommonArgs& common, const std::optional<std::string>& tx_hex,
              const std::optional<std::string>& file, std::ostream& out) {
    Transaction tx = parse_transaction(tx_bytes_from_args(tx_hex, file));
    write_output(tx_to_json(tx).dump(2) + "\n", common.out_path, out);
    return 0;
}

int run_extract(const CommonArgs& common, const std::optional<std::string>& tx_hex,
                const std::optional<std::string>& file,
                const std::optional<std::string>& profile_name,
                const std::optional<std::string>& profiles_path, const std::string& format_name,
                std::ostream& out, std::ostream& err) {
    Transaction tx = parse_transaction(tx_bytes_from_args(tx_hex, file));
    std::vector<std::string> warnings;
    auto payloads = extract_op_return(tx, &warnings);
    report_warnings(warnings, err);

    const SizeProfile* profile = nullptr;
    std::vector<SizeProfile> profiles;
    if (profile_name) {
        Config config = common.config();
        if (profiles_path) {
            profiles = load_size_profiles(*profiles_path);
        } else if (!config.profiles_path.empty()) {
            profiles = load_size_profiles(config.profiles_path);
        } else {
            profiles = default_profiles();
        }
        profile = find_profile(profiles, *profile_name);
        if (!profile) throw UsageError("unknown size profile: " + *profile_name);
    }

    ReportFormat format = parse_format(format_name);
    std::string content;
    if (format == ReportFormat::Csv) {
        content = profile ? "txid,vout,size,accepted,data_hex,ascii\n"
                          : "txid,vout,size,data_hex,ascii\n";
        for (const auto& p : payloads) {
            content += p.tx_ref.txid.hex() + "," + std::to_string(p.tx_ref.vout) + "," +
                       std::to_string(p.data.size());
            if (profile) {
                content += validate_payload_size(p, *profile).accepted ? ",1" : ",0";
            }
            content += "," + to_hex(p.data) + "," + decode_ascii(p) + "\n";
        }
    } else {
        json rows = json::array();
        for (const auto& p : payloads) {
            json row = {{"txid", p.tx_ref.txid.hex()},
                        {"vout", p.tx_ref.vout},
                        {"size", p.data.size()},
                        {"data_hex", to_hex(p.data)},
                        {"ascii", decode_ascii(p)}};
            if (profile) {
                auto verdict = validate_payload_size(p, *profile);
                row["accepted"] = verdict.accepted;
                if (!verdict.accepted) row["reason"] = verdict.reason;
            }
            rows.push_back(std::move(row));
        }
        content = rows.dump(2) + "\n";
    }
    write_output(content, common.out_path, out);
    return 0;
}

int run_classify(const CommonArgs& common, const std::optional<std::string>& registry_flag,
                 const std::string& corpus_path, const std::string& format_name,
                 std::ostream& out, std::ostream& err) {
    Config config = common.config();
    std::vector<std::string> warnings;
    ProtocolRegistry registry = load_registry(resolve_registry_path(registry_flag, config),
                                              &warnings);
    report_warnings(warnings, err);
    auto records = read_corpus(corpus_path);

    ReportFormat format = parse_format(format_name);
    std::string content;
    if (format == ReportFormat::Csv) {
        content = "timestamp,block,txid,verdict,protocol\n";
        for (const auto& rec : records) {
            Classification cls = classify_payload(rec.payload(), registry);
            content += format_rfc3339(rec.timestamp) + "," + std::to_string(rec.block_height) +
                       "," + rec.txid.hex() + "," + to_string(cls.verdict) + "," + cls.protocol +
                       "\n";
        }
    } else {
        json rows = json::array();
        for (const auto& rec : records) {
            Classification cls = classify_payload(rec.payload(), registry);
            rows.push_back({{"timestamp", format_rfc3339(rec.timestamp)},
                            {"block", rec.block_height},
                            {"txid", rec.txid.hex()},
                            {"verdict", to_string(cls.verdict)},
                            {"protocol", cls.protocol}});
        }
        content = rows.dump(2) + "\n";
    }
    write_output(content, common.out_path, out);
    return 0;
}

int run_report(const CommonArgs& common, const std::optional<std::string>& registry_flag,
               const std::string& corpus_path, const std::string& period_name,
               const std::string& format_name, bool plotdata, bool share, std::ostream& out,
               std::ostream& err) {
    Config config = common.config();
    std::vector<std::string> warnings;
    ProtocolRegistry registry = load_registry(resolve_registry_path(registry_flag, config),
                                              &warnings);
    report_warnings(warnings, err);

    Period period;
    if (period_name == "year") {
        period = Period::Year;
    } else if (period_name == "month") {
        period = Period::Month;
    } else {
        throw UsageError("unknown period: " + period_name);
    }

    auto records = read_corpus(corpus_path);
    auto classified = classify_records(records, registry);
    ReportFormat format = parse_format(format_name);

    std::string content;
    if (share) {
        content = render_share_report(share_report(classified), format);
    } else {
        content = render_report(aggregate(classified, period), format, plotdata);
    }
    write_output(content, common.out_path, out);
    return 0;
}

int run_keygen(const CommonArgs& common, std::ostream& out, std::ostream& err) {
    if (!common.out_path) throw UsageError("stealth-keygen needs --out PATH for the key file");
    stealth::StealthIdentity identity = stealth::keygen();
    stealth::save_identity(identity, *common.out_path);
    err << "wrote private keys to " << *common.out_path << " -- keep that file secret\n";
    json doc = {{"spend_public", identity.spend_public.hex()},
                {"view_public", identity.view_public->hex()}};
    out << doc.dump(2) << "\n";
    return 0;
}

int run_send(const std::string& spend_pub_hex, const std::string& view_pub_hex,
             const std::optional<std::string>& out_prefix, std::ostream& out) {
    auto spend_pub = stealth::CurvePoint::from_hex(spend_pub_hex);
    auto view_pub = stealth::CurvePoint::from_hex(view_pub_hex);
    auto entropy = stealth::system_entropy();
    stealth::StealthPayment payment = stealth::send_stealth(entropy, view_pub, spend_pub);

    if (out_prefix) {
        std::ofstream script_file(*out_prefix + ".script", std::ios::trunc);
        std::ofstream address_file(*out_prefix + ".address", std::ios::trunc);
        if (!script_file || !address_file) throw IoError("cannot write " + *out_prefix + ".*");
        script_file << to_hex(payment.payload.raw_script) << "\n";
        address_file << payment.transfer_address.hex() << "\n";
        if (!script_file || !address_file) throw IoError("write failed: " + *out_prefix + ".*");
    }
    json doc = {{"transfer_address", payment.transfer_address.hex()},
                {"ephemeral_public", payment.ephemeral_public.hex()},
                {"payload_script", to_hex(payment.payload.raw_script)}};
    out << doc.dump(2) << "\n";
    return 0;
}

int run_scan(const CommonArgs& common, const std::string& keys_path,
             const std::string& corpus_path, const std::string& format_name, std::ostream& out,
             std::ostream& err) {
    stealth::KeyFile keys = stealth::load_key_file(keys_path);
    auto rows = read_scan_corpus(corpus_path);

    std::vector<stealth::ScanInput> inputs;
    inputs.reserve(rows.size());
    for (const auto& row : rows) {
        stealth::ScanInput input;
        input.payload = row.record.payload();
        if (!row.output_script.empty()) input.candidate_scripts.push_back(row.output_script);
        inputs.push_back(std::move(input));
    }

    std::vector<std::string> warnings;
    std::vector<stealth::Detection> detections;
    if (keys.view_only()) {
        detections = stealth::view_only_scan(inputs, *keys.view_private, *keys.spend_public,
                                             &warnings);
        err << "view-only scan: detections carry no spend keys\n";
    } else {
        detections = stealth::scan_payments(inputs, keys.to_identity(), &warnings);
    }
    report_warnings(warnings, err);

    ReportFormat format = parse_format(format_name);
    std::string content;
    if (format == ReportFormat::Csv) {
        content = "row,txid,transfer_address,spend_key\n";
        for (const auto& d : detections) {
            content += std::to_string(d.input_index) + "," + rows[d.input_index].record.txid.hex() +
                       "," + d.transfer_address.hex() + "," +
                       (d.spend_key ? d.spend_key->hex() : "") + "\n";
        }
    } else {
        json doc = json::array();
        for (const auto& d : detections) {
            json row = {{"row", d.input_index},
                        {"txid", rows[d.input_index].record.txid.hex()},
                        {"transfer_address", d.transfer_address.hex()}};
            if (d.spend_key) row["spend_key"] = d.spend_key->hex();
            doc.push_back(std::move(row));
        }
        content = doc.dump(2) + "\n";
    }
    write_output(content, common.out_path, out);
    err << detections.size() << " detection(s)\n";
    return 0;
}

int run_fetch(const CommonArgs& common, std::uint64_t from_block, std::uint64_t to_block,
              bool latest_only, std::ostream& out, std::ostream& err) {
    Config config = common.config();
    if (config.source.base_url.empty()) {
        throw UsageError("fetch needs a configured source.base_url (see --config)");
    }
    HttpDataSource source(config.source);
    source.on_retry = [&err](const std::string& msg) { err << "warning: " << msg << "\n"; };
    if (latest_only) {
        out << source.latest_block() << "\n";
        return 0;
    }
    auto records = source.fetch_range(from_block, to_block);
    std::ostringstream buf;
    write_corpus(records, buf);
    write_output(buf.str(), common.out_path, out);
    err << records.size() << " record(s) fetched\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"OP_RETURN metadata toolkit: transaction parsing, meta-protocol "
                 "classification, usage reports, and stealth-address scanning",
                 "metascope"};
    app.require_subcommand(1);

    CommonArgs common;
    app.add_option("--config", common.config_path, "Path to the JSON config file")
        ->envname(kConfigEnvVar);

    // parse
    auto* parse_cmd = app.add_subcommand("parse", "Parse a raw transaction and print it as JSON");
    std::optional<std::string> parse_tx, parse_file;
    parse_cmd->add_option("--tx", parse_tx, "Raw transaction hex");
    parse_cmd->add_option("--file", parse_file, "File holding hex or raw transaction bytes");
    parse_cmd->add_option("--out", common.out_path, "Write output to this file");

    // extract
    auto* extract_cmd =
        app.add_subcommand("extract", "Extract OP_RETURN payloads from a transaction");
    std::optional<std::string> extract_tx, extract_file, extract_profile, extract_profiles;
    std::string extract_format = "csv";
    extract_cmd->add_option("--tx", extract_tx, "Raw transaction hex");
    extract_cmd->add_option("--file", extract_file, "File holding hex or raw transaction bytes");
    extract_cmd->add_option("--profile", extract_profile, "Size profile to validate against");
    extract_cmd->add_option("--profiles", extract_profiles, "Size profile file");
    extract_cmd->add_option("--format", extract_format, "csv or json");
    extract_cmd->add_option("--out", common.out_path, "Write output to this file");

    // classify
    auto* classify_cmd =
        app.add_subcommand("classify", "Classify every corpus record against the registry");
    std::optional<std::string> classify_registry;
    std::string classify_corpus_path, classify_format = "csv";
    classify_cmd->add_option("--registry", classify_registry, "Protocol registry file");
    classify_cmd->add_option("--corpus", classify_corpus_path, "Corpus CSV file")->required();
    classify_cmd->add_option("--format", classify_format, "csv or json");
    classify_cmd->add_option("--out", common.out_path, "Write output to this file");

    // report
    auto* report_cmd =
        app.add_subcommand("report", "Aggregate classifications into evolution/share reports");
    std::optional<std::string> report_registry;
    std::string report_corpus_path, report_period = "year", report_format = "csv";
    bool report_plotdata = false, report_share = false;
    report_cmd->add_option("--registry", report_registry, "Protocol registry file");
    report_cmd->add_option("--corpus", report_corpus_path, "Corpus CSV file")->required();
    report_cmd->add_option("--period", report_period, "year or month");
    report_cmd->add_option("--format", report_format, "csv or json");
    report_cmd->add_flag("--plotdata", report_plotdata, "Emit per-verdict (x,y) series");
    report_cmd->add_flag("--share", report_share, "Emit the share report instead");
    report_cmd->add_option("--out", common.out_path, "Write output to this file");

    // stealth-keygen
    auto* keygen_cmd = app.add_subcommand("stealth-keygen", "Generate a fresh stealth identity");
    keygen_cmd->add_option("--out", common.out_path, "Key file to write (private!)");

    // stealth-send
    auto* send_cmd = app.add_subcommand(
        "stealth-send", "Derive a one-time address and OP_RETURN payload for a recipient");
    std::string send_spend_pub, send_view_pub;
    std::optional<std::string> send_prefix;
    send_cmd->add_option("--spend-pub", send_spend_pub, "Recipient spend public key (hex)")
        ->required();
    send_cmd->add_option("--view-pub", send_view_pub, "Recipient view public key (hex)")
        ->required();
    send_cmd->add_option("--out", send_prefix, "Write <prefix>.script and <prefix>.address");

    // stealth-scan
    auto* scan_cmd =
        app.add_subcommand("stealth-scan", "Scan a corpus for payments to an identity");
    std::string scan_keys, scan_corpus_path, scan_format = "csv";
    scan_cmd->add_option("--keys", scan_keys, "Key file")->required();
    scan_cmd->add_option("--corpus", scan_corpus_path, "Scan corpus CSV file")->required();
    scan_cmd->add_option("--format", scan_format, "csv or json");
    scan_cmd->add_option("--out", common.out_path, "Write output to this file");

    // fetch
    auto* fetch_cmd =
        app.add_subcommand("fetch", "Fetch OP_RETURN records from the configured source");
    std::uint64_t fetch_from = 0, fetch_to = 0;
    bool fetch_latest = false;
    auto* from_opt = fetch_cmd->add_option("--from-block", fetch_from, "First block height");
    auto* to_opt = fetch_cmd->add_option("--to-block", fetch_to, "Last block height");
    fetch_cmd->add_flag("--latest", fetch_latest, "Print the source's best height and exit");
    fetch_cmd->add_option("--out", common.out_path, "Write output to this file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (parse_cmd->parsed()) return run_parse(common, parse_tx, parse_file, out);
        if (extract_cmd->parsed()) {
            return run_extract(common, extract_tx, extract_file, extract_profile,
                               extract_profiles, extract_format, out, err);
        }
        if (classify_cmd->parsed()) {
            return run_classify(common, classify_registry, classify_corpus_path, classify_format,
                                out, err);
        }
        if (report_cmd->parsed()) {
            return run_report(common, report_registry, report_corpus_path, report_period,
                              report_format, report_plotdata, report_share, out, err);
        }
        if (keygen_cmd->parsed()) return run_keygen(common, out, err);
        if (send_cmd->parsed()) return run_send(send_spend_pub, send_view_pub, send_prefix, out);
        if (scan_cmd->parsed()) {
            return run_scan(common, scan_keys, scan_corpus_path, scan_format, out, err);
        }
        if (fetch_cmd->parsed()) {
            if (!fetch_latest && (from_opt->count() == 0 || to_opt->count() == 0)) {
                throw UsageError("fetch needs --from-block and --to-block (or --latest)");
            }
            return run_fetch(common, fetch_from, fetch_to, fetch_latest, out, err);
        }
        throw UsageError("no subcommand given");
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << app.help();
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace metascope::cli
