#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tradekit {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Splits one CSV record on commas. Double-quoted fields may contain commas
/// and doubled quotes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Splits text into lines, accepting \n and \r\n.
std::vector<std::string_view> split_lines(std::string_view text);

/// Whole-field decimal parse; nullopt on junk or trailing characters.
std::optional<double> parse_double(std::string_view s);

/// Shortest representation that parses back to the identical double.
std::string format_shortest(double v);

/// printf-style fixed formatting with `decimals` places.
std::string format_fixed(double v, int decimals);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace tradekit
