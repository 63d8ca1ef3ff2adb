#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "alticon/image.hpp"

namespace alticon {

/// Decodes PNG, WebP, or JPEG bytes into RGBA. Throws a Parse error on
/// unsupported or corrupt data.
Image decode_image(std::span<const std::uint8_t> bytes);
Image load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const Image& image);

}  // namespace alticon
