#include "alticon/extract.hpp"

#include <algorithm>
#include <set>

#include "alticon/util.hpp"

namespace alticon {
namespace {

void walk(const Screen& screen, const ViewNode& node, const ViewNode* parent,
          std::vector<int>& path, std::vector<IconCandidate>& out) {
    if (is_icon_class(node)) {
        IconCandidate c;
        c.screen_ref = screen.screen_id;
        c.path = path;
        c.node = node;
        if (parent != nullptr) c.parent = *parent;
        out.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        walk(screen, node.children[i], &node, path, out);
        path.pop_back();
    }
}

bool same_node(const ViewNode& a, const ViewNode& b) {
    return a.class_name == b.class_name && a.resource_id == b.resource_id;
}

}  // namespace

bool is_icon_class(const ViewNode& node) {
    if (ends_with(node.class_name, "ImageButton")) return true;
    if (ends_with(node.class_name, "ImageView")) return node.clickable == true;
    return false;
}

std::vector<IconCandidate> detect_icons(const Screen& screen) {
    std::vector<IconCandidate> out;
    std::vector<int> path;
    walk(screen, screen.root, nullptr, path, out);
    return out;
}

bool size_filter(const IconCandidate& candidate, std::pair<int, int> screen_dims,
                 const SizeFilterConfig& config) {
    if (!candidate.node.bounds) return true;  // advisory: no render yet
    const BoundingBox& b = *candidate.node.bounds;
    const double w = b.width();
    const double h = b.height();
    if (w > config.max_dim_fraction * screen_dims.first) return false;
    if (h > config.max_dim_fraction * screen_dims.second) return false;
    const double long_side = std::max(w, h);
    const double short_side = std::min(w, h);
    if (short_side <= 0.0) return false;
    if (long_side / short_side > config.max_aspect) return false;
    if (w < config.min_side_px || h < config.min_side_px) return false;
    return true;
}

IconContext extract_context(const Screen& screen, const IconCandidate& candidate) {
    IconContext ctx;
    ctx.app_activity_name = screen.activity_name;
    ctx.ui_element_info = NodeProps::from_node(candidate.node);
    if (candidate.parent) {
        NodeProps parent_props = NodeProps::from_node(*candidate.parent);
        if (!parent_props.empty()) ctx.parent = parent_props;
        bool skipped_self = false;
        for (const ViewNode& child : candidate.parent->children) {
            // The candidate's own slot is identified by value; duplicate
            // siblings with identical properties stay in the list.
            if (!skipped_self && same_node(child, candidate.node)) {
                skipped_self = true;
                continue;
            }
            NodeProps props = NodeProps::from_node(child);
            if (!props.empty()) ctx.siblings.push_back(std::move(props));
        }
    }
    return ctx;
}

std::vector<IconCandidate> diff_new_icons(const Screen& prev, const Screen& next) {
    const std::vector<IconCandidate> old_icons = detect_icons(prev);
    std::vector<IconCandidate> added;

    std::set<std::pair<std::vector<int>, std::string>> old_positions;
    std::multiset<std::string> old_resource_ids;
    for (const IconCandidate& c : old_icons) {
        old_positions.insert({c.path, c.node.class_name});
        if (c.node.resource_id) old_resource_ids.insert(*c.node.resource_id);
    }

    for (IconCandidate& c : detect_icons(next)) {
        if (old_positions.count({c.path, c.node.class_name}) > 0) continue;
        if (c.node.resource_id) {
            auto it = old_resource_ids.find(*c.node.resource_id);
            if (it != old_resource_ids.end()) {
                old_resource_ids.erase(it);  // each old icon matches once
                continue;
            }
        }
        added.push_back(std::move(c));
    }
    return added;
}

}  // namespace alticon
