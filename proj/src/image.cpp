#include "alticon/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace alticon {
namespace {

// Bilinear sample at (sx, sy) in source pixel coordinates.
void sample_bilinear(const Image& src, double sx, double sy, std::uint8_t* out) {
    sx = std::clamp(sx, 0.0, static_cast<double>(src.width - 1));
    sy = std::clamp(sy, 0.0, static_cast<double>(src.height - 1));
    const int x0 = static_cast<int>(sx);
    const int y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, src.width - 1);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double fx = sx - x0;
    const double fy = sy - y0;
    const std::uint8_t* p00 = src.pixel(x0, y0);
    const std::uint8_t* p10 = src.pixel(x1, y0);
    const std::uint8_t* p01 = src.pixel(x0, y1);
    const std::uint8_t* p11 = src.pixel(x1, y1);
    for (int c = 0; c < 4; ++c) {
        const double v = (1 - fx) * (1 - fy) * p00[c] + fx * (1 - fy) * p10[c] +
                         (1 - fx) * fy * p01[c] + fx * fy * p11[c];
        out[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
}

Image resize_bilinear(const Image& src, int w, int h) {
    if (src.width == w && src.height == h) return src;
    Image out;
    out.width = w;
    out.height = h;
    out.rgba.resize(static_cast<std::size_t>(w) * h * 4);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // map the destination pixel center back into source space
            const double sx = (x + 0.5) * src.width / w - 0.5;
            const double sy = (y + 0.5) * src.height / h - 0.5;
            sample_bilinear(src, sx, sy, out.pixel(x, y));
        }
    }
    return out;
}

std::array<std::uint8_t, 4> pad_color(const Image& img) {
    const std::uint8_t* corners[4] = {
        img.pixel(0, 0),
        img.pixel(img.width - 1, 0),
        img.pixel(0, img.height - 1),
        img.pixel(img.width - 1, img.height - 1),
    };
    for (int k = 1; k < 4; ++k) {
        for (int c = 0; c < 4; ++c) {
            if (corners[k][c] != corners[0][c]) return {0, 0, 0, 0};  // no consensus
        }
    }
    return {corners[0][0], corners[0][1], corners[0][2], corners[0][3]};
}

}  // namespace

Image Image::solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a) {
    Image img;
    img.width = w;
    img.height = h;
    img.rgba.resize(static_cast<std::size_t>(w) * h * 4);
    for (std::size_t i = 0; i < img.rgba.size(); i += 4) {
        img.rgba[i] = r;
        img.rgba[i + 1] = g;
        img.rgba[i + 2] = b;
        img.rgba[i + 3] = a;
    }
    return img;
}

Image crop_icon(const Image& screenshot, const BoundingBox& bounds, DiagnosticSink* diags) {
    BoundingBox b = bounds;
    if (b.left < 0 || b.top < 0 || b.right > screenshot.width || b.bottom > screenshot.height) {
        b.left = std::clamp(b.left, 0, screenshot.width);
        b.top = std::clamp(b.top, 0, screenshot.height);
        b.right = std::clamp(b.right, 0, screenshot.width);
        b.bottom = std::clamp(b.bottom, 0, screenshot.height);
        diag(diags, "crop_icon", "bounds exceed the screenshot; clamped to the image edge");
    }
    if (b.right <= b.left || b.bottom <= b.top) {
        throw Error(Error::Kind::Validation, "crop bounds are empty after clamping");
    }
    Image out;
    out.width = b.width();
    out.height = b.height();
    out.rgba.resize(static_cast<std::size_t>(out.width) * out.height * 4);
    for (int y = 0; y < out.height; ++y) {
        const std::uint8_t* src = screenshot.pixel(b.left, b.top + y);
        std::copy(src, src + static_cast<std::size_t>(out.width) * 4, out.pixel(0, y));
    }
    return out;
}

Image standardize(const Image& icon, Upscaler* upscaler, DiagnosticSink* diags) {
    if (icon.empty()) {
        throw Error(Error::Kind::Validation, "standardize: empty input image");
    }
    Image working = icon;
    if (upscaler != nullptr) {
        std::optional<Image> upscaled = upscaler->upscale(icon);
        if (upscaled && !upscaled->empty()) {
            working = std::move(*upscaled);
        } else {
            diag(diags, "standardize", "super-resolution engine failed; using built-in resize");
        }
    }

    if (working.width == kStandardIconSize && working.height == kStandardIconSize) {
        return working;
    }

    const double scale = std::min(static_cast<double>(kStandardIconSize) / working.width,
                                  static_cast<double>(kStandardIconSize) / working.height);
    const int content_w =
        std::max(1, static_cast<int>(std::lround(working.width * scale)));
    const int content_h =
        std::max(1, static_cast<int>(std::lround(working.height * scale)));
    const Image content = resize_bilinear(working, content_w, content_h);

    const auto pad = pad_color(working);
    Image out = Image::solid(kStandardIconSize, kStandardIconSize, pad[0], pad[1], pad[2], pad[3]);
    const int off_x = (kStandardIconSize - content_w) / 2;
    const int off_y = (kStandardIconSize - content_h) / 2;
    for (int y = 0; y < content_h; ++y) {
        std::copy(content.pixel(0, y), content.pixel(0, y) + static_cast<std::size_t>(content_w) * 4,
                  out.pixel(off_x, off_y + y));
    }
    return out;
}

Image mark_bbox(const Image& container, const BoundingBox& bounds) {
    if (bounds.left < 0 || bounds.top < 0 || bounds.right > container.width ||
        bounds.bottom > container.height || !bounds.valid()) {
        throw Error(Error::Kind::Validation, "mark_bbox: bounds outside the container");
    }
    Image out = container;
    const int stroke = 3;
    for (int y = bounds.top; y < bounds.bottom; ++y) {
        for (int x = bounds.left; x < bounds.right; ++x) {
            const bool on_frame = x < bounds.left + stroke || x >= bounds.right - stroke ||
                                  y < bounds.top + stroke || y >= bounds.bottom - stroke;
            if (!on_frame) continue;
            std::uint8_t* px = out.pixel(x, y);
            px[0] = 255;
            px[1] = 0;
            px[2] = 0;
            px[3] = 255;
        }
    }
    return out;
}

}  // namespace alticon
