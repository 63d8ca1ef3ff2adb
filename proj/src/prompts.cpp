#include "alticon/prompts.hpp"

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

constexpr std::string_view kLabelSlot = "{icon-only label}";
constexpr std::string_view kContextSlot = "{icon context}";
constexpr std::string_view kTagClause = " with tag '{icon-only label}'";

// Template text is fixed; note the deliberate trailing spaces before the
// newlines and the singular/plural USER difference between the two modes.
const std::string kTextTTemplate =
    "You are an accessibility assistant to a mobile app Developer. A mobile app UI element "
    "that looks like an icon with tag '{icon-only label}' has view hierarchy content as below: \n"
    "{icon context}\n"
    "Generate a short (within 2-7 words), DESCRIPTIVE alt-text for the UI element. Provide "
    "only the alt-text as output, nothing else. Describe the element as if you were the app "
    "developer to HELP VISION-IMPAIRED USER understand its FUNCTIONALITY and PURPOSE. Avoid "
    "generic words like 'button', 'image', 'icon' etc.";

const std::string kMmtTemplate =
    "The attached image is of a UI element (icon) which has the following view hierarchy "
    "content: \n"
    "{icon context}  \n"
    "Generate a short (within 2-7 words), DESCRIPTIVE alt-text for the UI element. Provide "
    "only the alt-text as output, nothing else. Describe the element as if you were the app "
    "developer to HELP VISION-IMPAIRED USERS understand its FUNCTIONALITY and PURPOSE. Avoid "
    "generic words like 'button', 'image', 'icon' etc.";

const std::string kClassifierPrompt =
    "You are an image classifier. What is the class of this UI icon? "
    "Only provide the class as response.";

std::string replace_once(std::string text, std::string_view slot, std::string_view value) {
    const std::size_t pos = text.find(slot);
    if (pos != std::string::npos) {
        text.replace(pos, slot.size(), value);
    }
    return text;
}

}  // namespace

const PromptTemplates& PromptTemplates::builtin() {
    static const PromptTemplates templates{kTextTTemplate, kMmtTemplate, kClassifierPrompt};
    return templates;
}

IconContext apply_ablation(const IconContext& ctx, const AblationConfig& ablation) {
    IconContext out = ctx;
    if (ablation.omit_ocr_text) {
        out.in_icon_text.clear();
    }
    if (ablation.omit_resource_id) {
        out.ui_element_info.resource_id.reset();
    }
    if (ablation.omit_parent_sibling) {
        out.parent.reset();
        out.siblings.clear();
    }
    return out;
}

PromptPayload build_prompt(const IconContext& ctx, GenerationMode mode,
                           const AblationConfig& ablation, const PromptTemplates& templates,
                           bool allow_missing_label) {
    const IconContext effective = apply_ablation(ctx, ablation);
    // The icon label fills the TextT tag slot; it never rides along inside
    // the serialized context.
    const std::string context_json = canonical_context_json(effective, /*include_label=*/false);

    PromptPayload payload;
    payload.mode = mode;
    if (mode.variant == Variant::TextT) {
        std::string text = templates.textt;
        if (effective.icon_label) {
            text = replace_once(std::move(text), kLabelSlot, *effective.icon_label);
        } else if (allow_missing_label) {
            text = replace_once(std::move(text), kTagClause, "");
        } else {
            throw Error(Error::Kind::MissingLabel,
                        "missing icon label: TextT prompts need a zero-shot icon label");
        }
        payload.text = replace_once(std::move(text), kContextSlot, context_json);
    } else {
        payload.text = replace_once(templates.mmt, kContextSlot, context_json);
    }
    return payload;
}

std::string payload_fingerprint(const PromptPayload& payload, std::string_view model_id) {
    std::string material = payload.text;
    material.push_back('\0');
    if (payload.image) {
        material.append(reinterpret_cast<const char*>(payload.image->bytes.data()),
                        payload.image->bytes.size());
    }
    material.push_back('\0');
    material.append(model_id);
    return sha256_hex(material);
}

}  // namespace alticon
