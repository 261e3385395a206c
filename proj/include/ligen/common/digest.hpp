#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace ligen {

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_hex(std::span<const double> values);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ligen
