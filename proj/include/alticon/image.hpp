#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "alticon/error.hpp"
#include "alticon/model.hpp"

namespace alticon {

/// RGBA8 pixel buffer, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;

    static Image solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b,
                       std::uint8_t a = 255);

    bool empty() const noexcept { return width <= 0 || height <= 0; }
    std::uint8_t* pixel(int x, int y) { return rgba.data() + 4 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* pixel(int x, int y) const {
        return rgba.data() + 4 * (static_cast<std::size_t>(y) * width + x);
    }

    friend bool operator==(const Image&, const Image&) = default;
};

/// Optional external super-resolution engine used by standardize().
class Upscaler {
public:
    virtual ~Upscaler() = default;
    /// Returns the upscaled image, or nullopt on engine failure.
    virtual std::optional<Image> upscale(const Image& input) = 0;
};

inline constexpr int kStandardIconSize = 128;

/// Exact pixel crop. Bounds reaching past the image edge are clamped with
/// a warning diagnostic.
Image crop_icon(const Image& screenshot, const BoundingBox& bounds,
                DiagnosticSink* diags = nullptr);

/// Standardizes an icon to 128x128: routes through the configured
/// super-resolution engine when present, then aspect-preserving resize
/// with edge padding. Pad color is the corner-pixel consensus, else
/// transparent. Engine failure falls back to the built-in resize.
Image standardize(const Image& icon, Upscaler* upscaler = nullptr,
                  DiagnosticSink* diags = nullptr);

/// Draws a pure-red 3 px rectangle outline just inside the given bounds;
/// all other pixels are unchanged.
Image mark_bbox(const Image& container, const BoundingBox& icon_bounds_relative);

}  // namespace alticon
