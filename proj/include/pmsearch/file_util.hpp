#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pmsearch {

[[nodiscard]] std::string read_file(std::filesystem::path const& path);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(std::filesystem::path const& path, std::string_view contents);

[[nodiscard]] std::string to_lower_ascii(std::string_view text);

[[nodiscard]] std::string trim(std::string_view text);

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

}  // namespace pmsearch
