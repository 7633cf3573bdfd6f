#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "metascope/datasource.hpp"

namespace metascope {

/// Toolkit configuration. Everything has a usable default; the file only
/// overrides what it names. Flags beat config, config beats defaults.
struct Config {
    HttpSourceConfig source;
    std::string registry_path;
    std::string profiles_path;
    std::string default_profile = "btc";
    std::uint64_t dataset_from_block = 228596;
    std::uint64_t dataset_to_block = 474451;
};

/// JSON config file; throws ConfigError on unreadable or invalid content.
Config load_config(const std::filesystem::path& path);

inline constexpr const char* kConfigEnvVar = "METASCOPE_CONFIG";

/// Resolution order: explicit path, then $METASCOPE_CONFIG, then defaults.
Config resolve_config(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace metascope
