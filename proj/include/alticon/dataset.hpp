#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alticon/error.hpp"
#include "alticon/extract.hpp"
#include "alticon/json_canon.hpp"
#include "alticon/model.hpp"

namespace alticon {

/// Maps a Rico-format view hierarchy document onto a Screen:
/// "activity_name" -> activity_name, per node "class" -> class_name,
/// "resource-id" (suffix after the last '/') -> resource_id, "text",
/// "clickable", "bounds" [l,t,r,b]; children recursed in order, null
/// children skipped. Screen dims come from the root bounds. Schema
/// violations raise a Parse error naming the offending node path.
Screen load_rico_screen(const ordered_json& doc, const std::string& screen_id = "");

enum class Split { Train, Valid, Test };

std::string split_name(Split split);
Split split_from_name(std::string_view name);

/// One icon joined with its human captions; split assignments come from
/// the upstream split file and are never recomputed.
struct AnnotatedIcon {
    std::string screen_id;
    std::vector<int> path;
    BoundingBox bounds;
    Split split = Split::Train;
    std::vector<std::string> labels;  // 1..3 entries
    IconContext context;
    std::string icon_ref;
    std::optional<std::string> icon_png_base64;       // standardized crop, when embedded
    std::optional<std::string> container_png_base64;  // red-boxed container, when embedded
};

struct DatasetStats {
    struct SplitCounts {
        int icons = 0;
        int labels = 0;
    };
    SplitCounts train, valid, test;
    int screens = 0;

    SplitCounts totals() const;
    ordered_json to_json() const;
};

struct IconDataset {
    std::vector<AnnotatedIcon> icons;
    DatasetStats stats;
};

/// Captions keyed by (screen_id, bounds). File format: TSV lines of
/// screen_id <TAB> l,t,r,b <TAB> caption [<TAB> caption [<TAB> caption]].
struct CaptionTable {
    struct Row {
        BoundingBox bounds;
        std::vector<std::string> labels;
    };
    std::map<std::string, std::vector<Row>> by_screen;
};

CaptionTable load_captions(const std::filesystem::path& path);

/// Split assignment per screen. File format: TSV lines of
/// screen_id <TAB> train|valid|test.
using SplitTable = std::map<std::string, Split>;

SplitTable load_splits(const std::filesystem::path& path);

/// Applies detect_icons + size_filter per screen, joins captions by
/// (screen_id, bounds), assigns splits, and extracts each icon's context.
/// Icons without captions, and captions without a matching icon or
/// screen, are skipped with counted diagnostics.
IconDataset build_icon_dataset(std::span<const Screen> screens, const CaptionTable& captions,
                               const SplitTable& splits, const SizeFilterConfig& filter = {},
                               DiagnosticSink* diags = nullptr);

/// Keeps one seeded-random label per train/valid icon; test icons keep
/// all labels. Deterministic for a fixed seed.
void sample_r1(IconDataset& dataset, std::uint64_t seed);

/// Keyword table assigning icons to the common-class vocabulary by
/// resource id; unmatched icons fall into "other". Ships as an editable
/// data file: a JSON object of class -> [keywords].
struct ClassTable {
    std::vector<std::pair<std::string, std::vector<std::string>>> classes;

    static ClassTable load(const std::filesystem::path& path);
    static const ClassTable& builtin();
};

std::string assign_icon_class(const std::optional<std::string>& resource_id,
                              const ClassTable& table);

/// Seeded per-class sampling of training icons, at most `cap` per class.
std::vector<AnnotatedIcon> sample_finetune_subset(const IconDataset& dataset,
                                                  const ClassTable& table, int cap,
                                                  std::uint64_t seed);

ordered_json annotated_icon_to_json(const AnnotatedIcon& icon);
AnnotatedIcon annotated_icon_from_json(const ordered_json& doc);

/// Line-delimited JSON manifest of a dataset.
void write_manifest(const IconDataset& dataset, const std::filesystem::path& path);
IconDataset read_manifest(const std::filesystem::path& path);

}  // namespace alticon
