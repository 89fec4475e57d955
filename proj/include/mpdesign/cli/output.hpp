#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mpdesign::cli {

// Shortest decimal that reads back to the same double, '.' separator,
// independent of the locale.
std::string format_number(double value);
std::string format_number(std::uint64_t value);

// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view content);

}  // namespace mpdesign::cli
