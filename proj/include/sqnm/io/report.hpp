#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

namespace sqnm::io {

// nlohmann::json keeps object keys in a std::map, so dumps are key-sorted.
using Json = nlohmann::json;

/// Two-space indented dump terminated by a single LF.
std::string render_report(const Json& report);
/// Throws Io when the file cannot be written.
void save_report(const Json& report, const std::filesystem::path& path);

} // namespace sqnm::io
