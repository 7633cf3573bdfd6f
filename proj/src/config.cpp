#include "metascope/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace metascope {

namespace {

using json = nlohmann::json;

template <typename T>
void read_into(const json& obj, const char* key, T& target) {
    if (!obj.contains(key)) return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config is not valid JSON: " + path.string());
    if (!doc.is_object()) throw ConfigError("config root must be an object");

    Config config;
    read_into(doc, "registry", config.registry_path);
    read_into(doc, "profiles", config.profiles_path);
    read_into(doc, "default_profile", config.default_profile);
    if (doc.contains("dataset")) {
        const json& ds = doc["dataset"];
        read_into(ds, "from_block", config.dataset_from_block);
        read_into(ds, "to_block", config.dataset_to_block);
    }
    if (doc.contains("source")) {
        const json& src = doc["source"];
        auto& s = config.source;
        read_into(src, "base_url", s.base_url);
        read_into(src, "latest_path", s.latest_path);
        read_into(src, "range_path", s.range_path);
        read_into(src, "auth_header", s.auth_header);
        read_into(src, "auth_value", s.auth_value);
        read_into(src, "rate_limit_per_sec", s.rate_limit_per_sec);
        read_into(src, "page_start", s.page_start);
        read_into(src, "max_range", s.max_range);
        if (src.contains("retry")) {
            const json& retry = src["retry"];
            read_into(retry, "max_retries", s.retry.max_retries);
            std::int64_t base_ms = s.retry.backoff_base.count();
            read_into(retry, "backoff_base_ms", base_ms);
            s.retry.backoff_base = std::chrono::milliseconds(base_ms);
            read_into(retry, "backoff_factor", s.retry.backoff_factor);
        }
        if (src.contains("fields")) {
            const json& fields = src["fields"];
            auto& f = s.fields;
            read_into(fields, "records", f.records);
            read_into(fields, "timestamp", f.timestamp);
            read_into(fields, "block", f.block);
            read_into(fields, "txid", f.txid);
            read_into(fields, "script", f.script);
            read_into(fields, "latest", f.latest);
        }
    }
    return config;
}

Config resolve_config(const std::optional<std::filesystem::path>& explicit_path) {
    if (explicit_path) return load_config(*explicit_path);
    if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
        return load_config(env);
    }
    return Config{};
}

}  // namespace metascope
