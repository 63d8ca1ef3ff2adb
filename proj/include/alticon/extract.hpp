#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alticon/model.hpp"

namespace alticon {

/// A detected clickable icon: the node, its tree path, and its direct DOM
/// parent (absent only when the icon is the root).
struct IconCandidate {
    std::string screen_ref;
    std::vector<int> path;
    ViewNode node;
    std::optional<ViewNode> parent;
};

/// Thresholds for dropping abnormally large or narrow elements. The exact
/// cutoffs are configurable; these defaults are what the dataset pipeline
/// and the CLI use unless overridden.
struct SizeFilterConfig {
    double max_dim_fraction = 0.5;  // of the corresponding screen dimension
    double max_aspect = 4.0;        // long side / short side
    int min_side_px = 8;
};

/// Returns, in document order, every node whose class ends in "ImageButton"
/// plus every clickable node whose class ends in "ImageView". Suffix
/// matching catches AppCompat/Material subclasses.
std::vector<IconCandidate> detect_icons(const Screen& screen);

bool is_icon_class(const ViewNode& node);

/// Keep/drop decision for one candidate. Candidates without bounds are
/// kept: during live development bounds do not exist yet.
bool size_filter(const IconCandidate& candidate, std::pair<int, int> screen_dims,
                 const SizeFilterConfig& config = {});

/// Builds the icon context from the DOM tree: activity name, the icon's
/// own properties, the parent container's properties, and the parent's
/// other direct children in document order (blank-only siblings omitted).
/// OCR text and the icon label are left unset here.
IconContext extract_context(const Screen& screen, const IconCandidate& candidate);

/// Candidates present in `next` with no match in `prev`. Matching is by
/// (path, class_name) with a resource_id fallback for shifted paths.
std::vector<IconCandidate> diff_new_icons(const Screen& prev, const Screen& next);

}  // namespace alticon
