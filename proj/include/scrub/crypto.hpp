#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace scrub::crypto {

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

// Streams the file; used for large files that should not be loaded whole.
std::string sha256_file_hex(const std::filesystem::path& path);

std::string hmac_sha256_hex(std::string_view key, std::string_view message);

std::string base64_encode(std::string_view data);
std::string base64_decode(std::string_view text);

}  // namespace scrub::crypto
