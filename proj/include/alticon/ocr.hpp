#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "alticon/error.hpp"
#include "alticon/image.hpp"

namespace alticon {

struct OcrLine {
    std::string text;
    double confidence = 0.0;  // in [0, 1]
};

/// Adapter over an external OCR engine. Wire contract: request is PNG
/// bytes, response is a JSON array of {"text": ..., "confidence": ...}.
class OcrEngine {
public:
    virtual ~OcrEngine() = default;
    virtual std::vector<OcrLine> recognize(std::span<const std::uint8_t> png_bytes) = 0;
};

/// Runs a shell command per request; PNG on stdin, JSON array on stdout.
class SubprocessOcrEngine : public OcrEngine {
public:
    explicit SubprocessOcrEngine(std::string command);
    std::vector<OcrLine> recognize(std::span<const std::uint8_t> png_bytes) override;

private:
    std::string command_;
};

/// POSTs the PNG to an HTTP endpoint (content-type image/png).
class HttpOcrEngine : public OcrEngine {
public:
    explicit HttpOcrEngine(std::string url);
    std::vector<OcrLine> recognize(std::span<const std::uint8_t> png_bytes) override;

private:
    std::string url_;
};

/// Fixed responses, for tests and offline runs.
class StubOcrEngine : public OcrEngine {
public:
    explicit StubOcrEngine(std::vector<OcrLine> lines) : lines_(std::move(lines)) {}
    std::vector<OcrLine> recognize(std::span<const std::uint8_t>) override { return lines_; }

private:
    std::vector<OcrLine> lines_;
};

inline constexpr double kDefaultOcrMinConfidence = 0.4;

/// In-icon text for one icon: engine lines filtered to the confidence
/// cutoff, trimmed, case-insensitively deduplicated, document order kept.
/// An unavailable engine degrades to an empty list with a diagnostic.
std::vector<std::string> ocr_in_icon_text(const Image& icon, OcrEngine* engine,
                                          double min_confidence = kDefaultOcrMinConfidence,
                                          DiagnosticSink* diags = nullptr);

std::vector<OcrLine> parse_ocr_response(std::string_view json_text);

}  // namespace alticon
