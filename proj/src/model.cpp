#include "alticon/model.hpp"

#include <string>

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

std::optional<std::string> keep_nonblank(const std::optional<std::string>& v) {
    if (!v || is_blank(*v)) return std::nullopt;
    return v;
}

// Key spellings follow the extracted-context shape: the icon itself uses
// "class_name", parent and sibling entries use "class".
ordered_json icon_props_json(const NodeProps& p) {
    ordered_json j = ordered_json::object();
    if (p.class_name) j["class_name"] = *p.class_name;
    if (p.resource_id) j["resource_id"] = *p.resource_id;
    if (p.text) j["text"] = *p.text;
    return j;
}

ordered_json member_props_json(const NodeProps& p) {
    ordered_json j = ordered_json::object();
    if (p.resource_id) j["resource_id"] = *p.resource_id;
    if (p.class_name) j["class"] = *p.class_name;
    if (p.text) j["text"] = *p.text;
    return j;
}

NodeProps member_props_from_json(const ordered_json& j) {
    NodeProps p;
    if (j.contains("resource_id")) p.resource_id = j["resource_id"].get<std::string>();
    if (j.contains("class")) p.class_name = j["class"].get<std::string>();
    if (j.contains("class_name")) p.class_name = j["class_name"].get<std::string>();
    if (j.contains("text")) p.text = j["text"].get<std::string>();
    return p;
}

}  // namespace

NodeProps NodeProps::from_node(const ViewNode& node) {
    NodeProps p;
    p.class_name = keep_nonblank(node.class_name.empty()
                                     ? std::optional<std::string>{}
                                     : std::optional<std::string>{node.class_name});
    p.resource_id = keep_nonblank(node.resource_id);
    p.text = keep_nonblank(node.text);
    return p;
}

std::string variant_name(Variant v) {
    return v == Variant::TextT ? "textt" : "mmt";
}

std::string image_scope_name(ImageScope s) {
    return s == ImageScope::Icon ? "icon" : "container";
}

std::string mode_name(GenerationMode mode) {
    if (mode.variant == Variant::TextT) return "textt";
    return mode.image_scope == ImageScope::Icon ? "mmt_i" : "mmt_c";
}

const ViewNode& node_at_path(const ViewNode& root, std::span<const int> path) {
    const ViewNode* node = &root;
    for (std::size_t depth = 0; depth < path.size(); ++depth) {
        const int idx = path[depth];
        if (idx < 0 || static_cast<std::size_t>(idx) >= node->children.size()) {
            throw BadPathError("bad path: index " + std::to_string(idx) + " at depth " +
                                   std::to_string(depth) + " (node has " +
                                   std::to_string(node->children.size()) + " children)",
                               static_cast<int>(depth));
        }
        node = &node->children[static_cast<std::size_t>(idx)];
    }
    return *node;
}

const ViewNode& node_at_path(const Screen& screen, std::span<const int> path) {
    return node_at_path(screen.root, path);
}

ordered_json context_to_json(const IconContext& ctx, bool include_label) {
    ordered_json j;
    j["app_activity_name"] = ctx.app_activity_name;
    j["UI_element_info"] = icon_props_json(ctx.ui_element_info);

    // parent_node keeps the extracted-context shape: one single-key object
    // per present property rather than one merged object.
    ordered_json parent = ordered_json::array();
    if (ctx.parent) {
        const ordered_json merged = member_props_json(*ctx.parent);
        for (auto it = merged.begin(); it != merged.end(); ++it) {
            ordered_json entry = ordered_json::object();
            entry[it.key()] = it.value();
            parent.push_back(std::move(entry));
        }
    }
    j["parent_node"] = std::move(parent);

    ordered_json siblings = ordered_json::array();
    for (const NodeProps& s : ctx.siblings) {
        siblings.push_back(member_props_json(s));
    }
    j["sibling_nodes"] = std::move(siblings);

    if (!ctx.in_icon_text.empty()) {
        j["in_icon_text"] = ctx.in_icon_text;
    }
    if (include_label && ctx.icon_label) {
        j["icon_label"] = *ctx.icon_label;
    }
    return j;
}

std::string canonical_context_json(const IconContext& ctx, bool include_label) {
    return canonical_dump(context_to_json(ctx, include_label));
}

IconContext context_from_json(const ordered_json& doc) {
    if (!doc.is_object()) {
        throw Error(Error::Kind::Parse, "icon context: expected a JSON object");
    }
    IconContext ctx;
    ctx.app_activity_name = doc.value("app_activity_name", std::string{});
    if (doc.contains("UI_element_info")) {
        const auto& info = doc["UI_element_info"];
        NodeProps p;
        if (info.contains("class_name")) p.class_name = info["class_name"].get<std::string>();
        if (info.contains("resource_id")) p.resource_id = info["resource_id"].get<std::string>();
        if (info.contains("text")) p.text = info["text"].get<std::string>();
        ctx.ui_element_info = p;
    }
    if (doc.contains("parent_node") && !doc["parent_node"].empty()) {
        NodeProps merged;
        for (const auto& entry : doc["parent_node"]) {
            NodeProps p = member_props_from_json(entry);
            if (p.class_name) merged.class_name = p.class_name;
            if (p.resource_id) merged.resource_id = p.resource_id;
            if (p.text) merged.text = p.text;
        }
        ctx.parent = merged;
    }
    if (doc.contains("sibling_nodes")) {
        for (const auto& entry : doc["sibling_nodes"]) {
            ctx.siblings.push_back(member_props_from_json(entry));
        }
    }
    if (doc.contains("in_icon_text")) {
        ctx.in_icon_text = doc["in_icon_text"].get<std::vector<std::string>>();
    }
    if (doc.contains("icon_label")) {
        ctx.icon_label = doc["icon_label"].get<std::string>();
    }
    return ctx;
}

}  // namespace alticon
