#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "alticon/backend.hpp"
#include "alticon/extract.hpp"
#include "alticon/ocr.hpp"
#include "alticon/watcher.hpp"

namespace alticon {

struct OcrConfig {
    std::optional<std::string> command;  // subprocess adapter
    std::optional<std::string> url;      // HTTP adapter
    double min_confidence = kDefaultOcrMinConfidence;

    bool configured() const noexcept { return command.has_value() || url.has_value(); }
};

/// Tool-wide configuration. Loaded from a JSON file; unknown keys are
/// rejected with their location so typos cannot silently change behavior.
struct ToolConfig {
    BackendConfig backend;
    GenerationMode mode;
    AblationConfig ablation;
    OcrConfig ocr;
    std::filesystem::path cache_dir;  // empty = no cache
    SizeFilterConfig size_filter;
    WatchOptions watch;
    std::uint64_t seed = 0;
    PromptTemplates templates = PromptTemplates::builtin();

    static ToolConfig load(const std::filesystem::path& path);
    static ToolConfig from_json(const ordered_json& doc);
};

GenerationMode mode_from_names(std::string_view variant, std::string_view image_scope);

}  // namespace alticon
