#pragma once

// Small locale-independent text helpers shared by the file parsers.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prefadvisor::text {

std::string_view trim(std::string_view s);

std::string to_lower(std::string_view s);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> split_lines(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

std::vector<std::string_view> split_whitespace(std::string_view s);

/// Whole-token parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<std::size_t> parse_size(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Throws DataError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

}  // namespace prefadvisor::text
