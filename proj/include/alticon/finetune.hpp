#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "alticon/image.hpp"
#include "alticon/prompts.hpp"

namespace alticon {

/// One fine-tuning example: the icon's context, the sampled ground-truth
/// label, its assigned icon class (for the per-class cap), and the icon
/// image for MMT exports.
struct FinetuneExample {
    IconContext context;
    std::optional<Image> image;
    std::string label;
    std::string icon_class = "other";
};

struct FinetuneExportConfig {
    int epochs = 3;
    int per_class_cap = 15;
    std::uint64_t seed = 0;           // provenance only; sampling happens upstream
    std::string sampling = "r1";
};

/// Writes one chat-format JSON object per line (user message = rendered
/// prompt, assistant message = label; MMT lines embed the icon as a base64
/// data-URL) plus a sidecar config JSON recording the fine-tune protocol.
/// A class exceeding the per-class cap is a validation error.
void export_finetune_dataset(std::span<const FinetuneExample> records, GenerationMode mode,
                             const std::filesystem::path& out_jsonl,
                             const std::filesystem::path& sidecar_json,
                             const FinetuneExportConfig& config = {},
                             const PromptTemplates& templates = PromptTemplates::builtin());

}  // namespace alticon
