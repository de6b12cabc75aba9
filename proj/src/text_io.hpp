#pragma once

// Internal helpers shared by the TSV/JSON writers and readers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace topicalign::io {

/// Nine significant digits, the precision of every numeric artifact.
std::string fmt(double value);

std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for batch use: whole buffer, parent dirs created.
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string_view> split(std::string_view line, char sep);
std::vector<std::string> lines(std::string_view text);

double parse_double(std::string_view field, const std::string& where);
long long parse_integer(std::string_view field, const std::string& where);

}  // namespace topicalign::io
