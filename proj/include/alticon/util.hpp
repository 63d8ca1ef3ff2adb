#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace alticon {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool is_blank(std::string_view s);
bool ends_with(std::string_view s, std::string_view suffix);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view s, char delim);

/// Collapses any run of whitespace (incl. newlines) to one space and trims.
std::string collapse_whitespace(std::string_view s);

std::string sha256_hex(std::string_view data);

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::string base64_encode(std::string_view data);
std::vector<std::uint8_t> base64_decode(std::string_view data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace alticon
