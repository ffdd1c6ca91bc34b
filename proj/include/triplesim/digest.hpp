#pragma once

#include <string>
#include <string_view>

namespace triplesim {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Digest of a file's full contents. Throws Error if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace triplesim
