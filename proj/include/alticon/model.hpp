#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alticon/json_canon.hpp"

namespace alticon {

/// Pixel rectangle in screen coordinates, left/top inclusive.
struct BoundingBox {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;

    int width() const noexcept { return right - left; }
    int height() const noexcept { return bottom - top; }
    bool valid() const noexcept { return left >= 0 && top >= 0 && left < right && top < bottom; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// One node of a parsed DOM tree. Children keep source-document order.
struct ViewNode {
    std::string class_name;
    std::optional<std::string> resource_id;
    std::optional<std::string> text;
    std::optional<std::string> content_description;
    std::optional<bool> clickable;
    std::optional<BoundingBox> bounds;
    std::vector<ViewNode> children;

    friend bool operator==(const ViewNode&, const ViewNode&) = default;
};

/// A full screen: activity name plus the root of its DOM tree, optionally
/// paired with a screenshot. If screenshot_path is set, screen_dims is too.
struct Screen {
    std::string screen_id;
    std::string activity_name;
    ViewNode root;
    std::optional<std::string> screenshot_path;
    std::optional<std::pair<int, int>> screen_dims;
};

/// The textual properties carried into an icon context. Blank or missing
/// source values are dropped on construction and contentDescription is
/// never representable here, so developer alt-text cannot leak into prompts.
struct NodeProps {
    std::optional<std::string> class_name;
    std::optional<std::string> resource_id;
    std::optional<std::string> text;

    static NodeProps from_node(const ViewNode& node);

    bool empty() const noexcept { return !class_name && !resource_id && !text; }

    friend bool operator==(const NodeProps&, const NodeProps&) = default;
};

/// The extracted context bundle for one icon: activity (A), the icon's own
/// properties (I), its container (P), the container's other direct
/// children (S), plus OCR text and the zero-shot icon label when available.
struct IconContext {
    std::string app_activity_name;
    NodeProps ui_element_info;
    std::optional<NodeProps> parent;
    std::vector<NodeProps> siblings;
    std::vector<std::string> in_icon_text;
    std::optional<std::string> icon_label;

    friend bool operator==(const IconContext&, const IconContext&) = default;
};

enum class Variant { TextT, MMT };
enum class ImageScope { Icon, Container };

/// Selects the generation flow: text-only with a zero-shot label (TextT)
/// or multimodal with an image payload (MMT); image_scope picks between
/// the cropped icon and its red-boxed container for MMT.
struct GenerationMode {
    Variant variant = Variant::TextT;
    ImageScope image_scope = ImageScope::Icon;

    friend bool operator==(const GenerationMode&, const GenerationMode&) = default;
};

std::string variant_name(Variant v);
std::string image_scope_name(ImageScope s);
std::string mode_name(GenerationMode mode);

/// Which context components are withheld from the prompt; all-false is the
/// full input row.
struct AblationConfig {
    bool omit_ocr_text = false;
    bool omit_resource_id = false;
    bool omit_parent_sibling = false;

    bool any() const noexcept { return omit_ocr_text || omit_resource_id || omit_parent_sibling; }

    friend bool operator==(const AblationConfig&, const AblationConfig&) = default;
};

struct TokenUsage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;

    friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct AltTextResult {
    std::string icon_ref;
    std::string alt_text;
    GenerationMode mode;
    std::string prompt_fingerprint;
    TokenUsage token_usage;
    double cost_usd = 0.0;
    bool cached = false;
};

/// Resolves a child-index path; [] addresses the root. Throws BadPathError
/// naming the failing depth for an out-of-range index.
const ViewNode& node_at_path(const Screen& screen, std::span<const int> path);
const ViewNode& node_at_path(const ViewNode& root, std::span<const int> path);

/// Canonical JSON form of an icon context, mirroring the shape the tool
/// extracts from the DOM tree: app_activity_name, UI_element_info,
/// parent_node (a list of single-key objects), sibling_nodes, then
/// in_icon_text / icon_label appended when present.
ordered_json context_to_json(const IconContext& ctx, bool include_label = true);
std::string canonical_context_json(const IconContext& ctx, bool include_label = true);
IconContext context_from_json(const ordered_json& doc);

}  // namespace alticon
