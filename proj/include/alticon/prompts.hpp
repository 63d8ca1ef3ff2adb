#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alticon/model.hpp"

namespace alticon {

struct ImageAttachment {
    std::vector<std::uint8_t> bytes;
    std::string media_type = "image/png";
};

/// A fully rendered request: prompt text, optional image, and a stable
/// fingerprint over text + image bytes + model id (set at send time).
struct PromptPayload {
    std::string text;
    std::optional<ImageAttachment> image;
    GenerationMode mode;
    std::string fingerprint;
};

/// Versioned prompt text. The built-in templates are fixed resources; a
/// config override is possible but flips `customized`, which commands echo
/// into their reports.
struct PromptTemplates {
    std::string textt;
    std::string mmt;
    std::string classifier;
    std::string version = "builtin-v1";
    bool customized = false;

    static const PromptTemplates& builtin();
};

/// Copy of the context with the ablated components removed: OCR text, the
/// icon's resource_id, or the parent + sibling entries.
IconContext apply_ablation(const IconContext& ctx, const AblationConfig& ablation);

/// Renders the template for the mode with {icon-only label} and
/// {icon context} substituted; the context serializes in canonical JSON.
/// TextT without a label raises a MissingLabel error unless
/// allow_missing_label is set, which drops the tag clause instead.
PromptPayload build_prompt(const IconContext& ctx, GenerationMode mode,
                           const AblationConfig& ablation = {},
                           const PromptTemplates& templates = PromptTemplates::builtin(),
                           bool allow_missing_label = false);

std::string payload_fingerprint(const PromptPayload& payload, std::string_view model_id);

}  // namespace alticon
