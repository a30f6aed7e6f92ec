#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace gspi {

/// Whole-file read. Throws ValidationError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over `path`, creating parent
/// directories as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

nlohmann::json read_json(const std::filesystem::path& path);

/// Pretty-printed (2-space indent) JSON with a trailing newline.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

}  // namespace gspi
