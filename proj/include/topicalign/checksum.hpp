#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace topicalign {

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits. Used for stoplist and
/// vocabulary fingerprints stored inside models.
std::string fnv1a_hex(std::string_view bytes);

/// SHA-256 of a file's contents as lowercase hex.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace topicalign
