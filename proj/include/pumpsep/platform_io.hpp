#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pumpsep/dispersion.hpp"

namespace pumpsep {

// Platform files: a single platform object or {"platforms": [ ... ]}.
// Key names and units are documented in docs/platform.schema.json.

nlohmann::ordered_json platform_to_json(const PlatformSpec& platform);
PlatformSpec platform_from_json(const nlohmann::json& doc);

std::vector<PlatformSpec> parse_platforms(const std::string& text,
                                          const std::string& source_name = "<input>");
std::vector<PlatformSpec> load_platform_file(const std::filesystem::path& path);

// Resolves a platform file name: as given if it exists, otherwise against each
// directory of the PUMPSEP_PLATFORM_PATH environment variable (':'-separated),
// then the installed data directory.
std::filesystem::path resolve_platform_file(const std::string& name);

inline constexpr const char* kPlatformPathEnv = "PUMPSEP_PLATFORM_PATH";

// Wraps a JSON parse error as a ConfigError carrying the 1-based line number.
[[noreturn]] void rethrow_parse_error(const nlohmann::json::parse_error& e,
                                      const std::string& text,
                                      const std::string& source_name);

} // namespace pumpsep
