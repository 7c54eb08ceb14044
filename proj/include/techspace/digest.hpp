#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace techspace {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Lowercase hex SHA-256 of a file's contents. Throws InputError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace techspace
