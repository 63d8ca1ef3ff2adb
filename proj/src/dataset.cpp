#include "alticon/dataset.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

// FNV-1a, used wherever sampling must be portable and order-independent;
// std::hash is implementation-defined and unsuitable for fixed seeds.
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ULL ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

ViewNode rico_node(const ordered_json& doc, const std::string& node_path) {
    if (!doc.is_object()) {
        throw Error(Error::Kind::Parse, "rico: node at " + node_path + " is not an object");
    }
    ViewNode node;
    if (!doc.contains("class") || !doc["class"].is_string() ||
        doc["class"].get<std::string>().empty()) {
        throw Error(Error::Kind::Parse, "rico: node at " + node_path + " is missing 'class'");
    }
    node.class_name = doc["class"].get<std::string>();

    if (doc.contains("resource-id") && doc["resource-id"].is_string()) {
        const std::string raw = doc["resource-id"].get<std::string>();
        const std::size_t slash = raw.rfind('/');
        const std::string id = slash == std::string::npos ? raw : raw.substr(slash + 1);
        if (!is_blank(id)) node.resource_id = id;
    }
    if (doc.contains("text") && doc["text"].is_string()) {
        node.text = doc["text"].get<std::string>();
    }
    if (doc.contains("content-desc") && doc["content-desc"].is_string()) {
        node.content_description = doc["content-desc"].get<std::string>();
    }
    if (doc.contains("clickable") && doc["clickable"].is_boolean()) {
        node.clickable = doc["clickable"].get<bool>();
    }
    if (doc.contains("bounds")) {
        const auto& b = doc["bounds"];
        if (!b.is_array() || b.size() != 4) {
            throw Error(Error::Kind::Parse,
                        "rico: node at " + node_path + " has malformed 'bounds'");
        }
        BoundingBox box{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
        if (box.valid()) node.bounds = box;
    }
    if (doc.contains("children")) {
        if (!doc["children"].is_array()) {
            throw Error(Error::Kind::Parse,
                        "rico: node at " + node_path + " has non-array 'children'");
        }
        int index = 0;
        for (const auto& child : doc["children"]) {
            if (child.is_null()) continue;  // Rico trees contain null slots
            node.children.push_back(
                rico_node(child, node_path + ".children[" + std::to_string(index) + "]"));
            ++index;
        }
    }
    return node;
}

std::string path_key(std::span<const int> path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) out.push_back('.');
        out += std::to_string(path[i]);
    }
    return out;
}

}  // namespace

Screen load_rico_screen(const ordered_json& doc, const std::string& screen_id) {
    if (!doc.is_object()) {
        throw Error(Error::Kind::Parse, "rico: document is not a JSON object");
    }
    const ordered_json* root = nullptr;
    if (doc.contains("root")) {
        root = &doc["root"];
    } else if (doc.contains("activity") && doc["activity"].is_object() &&
               doc["activity"].contains("root")) {
        root = &doc["activity"]["root"];
    }
    if (root == nullptr || root->is_null()) {
        throw Error(Error::Kind::Parse, "rico: document has no root node");
    }

    Screen screen;
    screen.screen_id = screen_id.empty() ? doc.value("screen_id", std::string{}) : screen_id;
    screen.activity_name = doc.value("activity_name", std::string{});
    screen.root = rico_node(*root, "root");
    if (screen.root.bounds) {
        screen.screen_dims = std::pair<int, int>{screen.root.bounds->right,
                                                 screen.root.bounds->bottom};
    }
    return screen;
}

std::string split_name(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
    }
    return "train";
}

Split split_from_name(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "valid" || name == "validation" || name == "dev") return Split::Valid;
    if (name == "test") return Split::Test;
    throw Error(Error::Kind::Parse, "unknown split name: " + std::string(name));
}

DatasetStats::SplitCounts DatasetStats::totals() const {
    return {train.icons + valid.icons + test.icons, train.labels + valid.labels + test.labels};
}

ordered_json DatasetStats::to_json() const {
    const SplitCounts total = totals();
    ordered_json j;
    for (const auto& [name, counts] :
         std::initializer_list<std::pair<const char*, const SplitCounts*>>{
             {"train", &train}, {"valid", &valid}, {"test", &test}}) {
        j[name] = {{"icons", counts->icons}, {"labels", counts->labels}};
    }
    j["total"] = {{"icons", total.icons}, {"labels", total.labels}};
    j["screens"] = screens;
    return j;
}

CaptionTable load_captions(const std::filesystem::path& path) {
    CaptionTable table;
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line) || line[0] == '#') continue;
        const std::vector<std::string> fields = split(line, '\t');
        if (fields.size() < 3) {
            throw Error(Error::Kind::Parse, "captions line " + std::to_string(line_no) +
                                                ": expected screen_id, bounds, caption...");
        }
        const std::vector<std::string> coords = split(fields[1], ',');
        if (coords.size() != 4) {
            throw Error(Error::Kind::Parse, "captions line " + std::to_string(line_no) +
                                                ": bounds must be l,t,r,b");
        }
        CaptionTable::Row row;
        try {
            row.bounds = BoundingBox{std::stoi(coords[0]), std::stoi(coords[1]),
                                     std::stoi(coords[2]), std::stoi(coords[3])};
        } catch (const std::exception&) {
            throw Error(Error::Kind::Parse,
                        "captions line " + std::to_string(line_no) + ": non-numeric bounds");
        }
        for (std::size_t i = 2; i < fields.size() && row.labels.size() < 3; ++i) {
            const std::string label = trim(fields[i]);
            if (!label.empty()) row.labels.push_back(label);
        }
        if (row.labels.empty()) continue;
        table.by_screen[fields[0]].push_back(std::move(row));
    }
    return table;
}

SplitTable load_splits(const std::filesystem::path& path) {
    SplitTable table;
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line) || line[0] == '#') continue;
        const std::vector<std::string> fields = split(line, '\t');
        if (fields.size() != 2) {
            throw Error(Error::Kind::Parse, "splits line " + std::to_string(line_no) +
                                                ": expected screen_id <TAB> split");
        }
        table[fields[0]] = split_from_name(trim(fields[1]));
    }
    return table;
}

IconDataset build_icon_dataset(std::span<const Screen> screens, const CaptionTable& captions,
                               const SplitTable& splits, const SizeFilterConfig& filter,
                               DiagnosticSink* diags) {
    IconDataset dataset;
    int unmatched_captions = 0;
    int unknown_screen_captions = 0;
    std::set<std::string> known_screens;
    std::set<std::string> screens_with_icons;

    for (const Screen& screen : screens) {
        known_screens.insert(screen.screen_id);
        const auto caption_it = captions.by_screen.find(screen.screen_id);
        if (caption_it == captions.by_screen.end()) continue;
        std::vector<bool> consumed(caption_it->second.size(), false);

        const auto split_it = splits.find(screen.screen_id);

        for (const IconCandidate& candidate : detect_icons(screen)) {
            if (!candidate.node.bounds) continue;  // dataset icons are positional
            if (screen.screen_dims && !size_filter(candidate, *screen.screen_dims, filter)) {
                continue;
            }
            const CaptionTable::Row* row = nullptr;
            for (std::size_t i = 0; i < caption_it->second.size(); ++i) {
                if (!consumed[i] && caption_it->second[i].bounds == *candidate.node.bounds) {
                    consumed[i] = true;
                    row = &caption_it->second[i];
                    break;
                }
            }
            if (row == nullptr) continue;
            if (split_it == splits.end()) {
                diag(diags, "build_icon_dataset",
                     "screen '" + screen.screen_id + "' is missing from the split file");
                break;
            }

            AnnotatedIcon icon;
            icon.screen_id = screen.screen_id;
            icon.path = candidate.path;
            icon.bounds = *candidate.node.bounds;
            icon.split = split_it->second;
            icon.labels = row->labels;
            icon.context = extract_context(screen, candidate);
            icon.icon_ref = screen.screen_id + "#" + path_key(candidate.path);
            screens_with_icons.insert(screen.screen_id);

            DatasetStats::SplitCounts& counts = icon.split == Split::Train ? dataset.stats.train
                                                : icon.split == Split::Valid
                                                    ? dataset.stats.valid
                                                    : dataset.stats.test;
            counts.icons += 1;
            counts.labels += static_cast<int>(icon.labels.size());
            dataset.icons.push_back(std::move(icon));
        }
        for (std::size_t i = 0; i < consumed.size(); ++i) {
            if (!consumed[i]) ++unmatched_captions;
        }
    }

    for (const auto& [screen_id, rows] : captions.by_screen) {
        if (known_screens.count(screen_id) == 0) {
            unknown_screen_captions += static_cast<int>(rows.size());
        }
    }
    if (unmatched_captions > 0) {
        diag(diags, "build_icon_dataset",
             std::to_string(unmatched_captions) + " caption row(s) matched no kept icon");
    }
    if (unknown_screen_captions > 0) {
        diag(diags, "build_icon_dataset",
             std::to_string(unknown_screen_captions) + " caption row(s) referenced unknown screens");
    }
    dataset.stats.screens = static_cast<int>(screens_with_icons.size());
    return dataset;
}

void sample_r1(IconDataset& dataset, std::uint64_t seed) {
    DatasetStats fresh;
    fresh.screens = dataset.stats.screens;
    for (AnnotatedIcon& icon : dataset.icons) {
        if (icon.split != Split::Test && icon.labels.size() > 1) {
            const std::size_t pick = fnv1a(icon.icon_ref, seed) % icon.labels.size();
            icon.labels = {icon.labels[pick]};
        }
        DatasetStats::SplitCounts& counts = icon.split == Split::Train ? fresh.train
                                            : icon.split == Split::Valid ? fresh.valid
                                                                         : fresh.test;
        counts.icons += 1;
        counts.labels += static_cast<int>(icon.labels.size());
    }
    dataset.stats = fresh;
}

ClassTable ClassTable::load(const std::filesystem::path& path) {
    const ordered_json doc = ordered_json::parse(read_file(path));
    if (!doc.is_object()) {
        throw Error(Error::Kind::Config, "class table must be a JSON object of class -> keywords");
    }
    ClassTable table;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        table.classes.emplace_back(it.key(), it.value().get<std::vector<std::string>>());
    }
    return table;
}

std::string assign_icon_class(const std::optional<std::string>& resource_id,
                              const ClassTable& table) {
    if (!resource_id) return "other";
    std::string id = to_lower(*resource_id);
    std::replace(id.begin(), id.end(), '-', '_');
    for (const auto& [name, keywords] : table.classes) {
        for (const std::string& keyword : keywords) {
            if (id.find(keyword) != std::string::npos) return name;
        }
    }
    return "other";
}

std::vector<AnnotatedIcon> sample_finetune_subset(const IconDataset& dataset,
                                                  const ClassTable& table, int cap,
                                                  std::uint64_t seed) {
    std::vector<std::string> class_order;
    std::map<std::string, std::vector<const AnnotatedIcon*>> by_class;
    for (const auto& [name, keywords] : table.classes) {
        class_order.push_back(name);
        by_class[name];
    }
    class_order.push_back("other");
    by_class["other"];

    for (const AnnotatedIcon& icon : dataset.icons) {
        if (icon.split != Split::Train) continue;
        by_class[assign_icon_class(icon.context.ui_element_info.resource_id, table)]
            .push_back(&icon);
    }

    std::vector<AnnotatedIcon> subset;
    for (const std::string& name : class_order) {
        std::vector<const AnnotatedIcon*>& members = by_class[name];
        // Fisher-Yates with an explicit draw so the result is portable.
        std::uint64_t state = fnv1a(name, seed);
        if (state == 0) state = 0x9e3779b97f4a7c15ULL;
        auto next = [&state]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return state;
        };
        for (std::size_t i = members.size(); i > 1; --i) {
            const std::size_t j = next() % i;
            std::swap(members[i - 1], members[j]);
        }
        const std::size_t take = std::min<std::size_t>(members.size(), static_cast<std::size_t>(cap));
        for (std::size_t i = 0; i < take; ++i) {
            subset.push_back(*members[i]);
        }
    }
    return subset;
}

ordered_json annotated_icon_to_json(const AnnotatedIcon& icon) {
    ordered_json j;
    j["icon_ref"] = icon.icon_ref;
    j["screen_id"] = icon.screen_id;
    j["path"] = icon.path;
    j["bounds"] = {icon.bounds.left, icon.bounds.top, icon.bounds.right, icon.bounds.bottom};
    j["split"] = split_name(icon.split);
    j["labels"] = icon.labels;
    j["context"] = context_to_json(icon.context);
    if (icon.icon_png_base64) j["icon_png_base64"] = *icon.icon_png_base64;
    if (icon.container_png_base64) j["container_png_base64"] = *icon.container_png_base64;
    return j;
}

AnnotatedIcon annotated_icon_from_json(const ordered_json& doc) {
    AnnotatedIcon icon;
    icon.icon_ref = doc.value("icon_ref", std::string{});
    icon.screen_id = doc.value("screen_id", std::string{});
    if (doc.contains("path")) icon.path = doc["path"].get<std::vector<int>>();
    if (doc.contains("bounds")) {
        const auto& b = doc["bounds"];
        icon.bounds = BoundingBox{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(),
                                  b[3].get<int>()};
    }
    icon.split = split_from_name(doc.value("split", std::string{"train"}));
    if (doc.contains("labels")) icon.labels = doc["labels"].get<std::vector<std::string>>();
    if (doc.contains("context")) icon.context = context_from_json(doc["context"]);
    if (doc.contains("icon_png_base64")) {
        icon.icon_png_base64 = doc["icon_png_base64"].get<std::string>();
    }
    if (doc.contains("container_png_base64")) {
        icon.container_png_base64 = doc["container_png_base64"].get<std::string>();
    }
    return icon;
}

void write_manifest(const IconDataset& dataset, const std::filesystem::path& path) {
    std::string out;
    for (const AnnotatedIcon& icon : dataset.icons) {
        out += annotated_icon_to_json(icon).dump();
        out += "\n";
    }
    write_file(path, out);
}

IconDataset read_manifest(const std::filesystem::path& path) {
    IconDataset dataset;
    std::istringstream in(read_file(path));
    std::string line;
    std::set<std::string> screens;
    while (std::getline(in, line)) {
        if (is_blank(line)) continue;
        AnnotatedIcon icon = annotated_icon_from_json(ordered_json::parse(line));
        DatasetStats::SplitCounts& counts = icon.split == Split::Train ? dataset.stats.train
                                            : icon.split == Split::Valid ? dataset.stats.valid
                                                                         : dataset.stats.test;
        counts.icons += 1;
        counts.labels += static_cast<int>(icon.labels.size());
        screens.insert(icon.screen_id);
        dataset.icons.push_back(std::move(icon));
    }
    dataset.stats.screens = static_cast<int>(screens.size());
    return dataset;
}

}  // namespace alticon
