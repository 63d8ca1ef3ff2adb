#include "alticon/pipeline.hpp"

#include <chrono>
#include <future>
#include <sstream>

#include "alticon/backend.hpp"
#include "alticon/error.hpp"
#include "alticon/image_io.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

std::string icon_name_of(const ViewNode& node) {
    return node.resource_id ? *node.resource_id : node.class_name;
}

// Re-locates a candidate in a freshly parsed document: by path when class
// and resource id still agree, else by a unique (resource_id, class)
// match anywhere in the tree.
const LayoutElement* relocate(const LayoutDocument& doc, const IconCandidate& candidate) {
    if (const LayoutElement* el = doc.find(candidate.path)) {
        const ViewNode& node = node_at_path(doc.screen, candidate.path);
        if (node.class_name == candidate.node.class_name &&
            (!candidate.node.resource_id || node.resource_id == candidate.node.resource_id)) {
            return el;
        }
    }
    if (!candidate.node.resource_id) return nullptr;
    const LayoutElement* unique = nullptr;
    for (const IconCandidate& other : detect_icons(doc.screen)) {
        if (other.node.resource_id == candidate.node.resource_id &&
            other.node.class_name == candidate.node.class_name) {
            if (unique != nullptr) return nullptr;  // ambiguous
            unique = doc.find(other.path);
        }
    }
    return unique;
}

}  // namespace

int AnnotateSummary::annotated() const {
    int n = 0;
    for (const IconOutcome& o : outcomes) n += o.injected ? 1 : 0;
    return n;
}

int AnnotateSummary::failed() const {
    int n = 0;
    for (const IconOutcome& o : outcomes) n += o.ok() ? 0 : 1;
    return n;
}

int AnnotateSummary::skipped() const {
    int n = 0;
    for (const IconOutcome& o : outcomes) n += o.skipped_existing ? 1 : 0;
    return n;
}

ordered_json AnnotateSummary::to_json() const {
    ordered_json j;
    j["annotated"] = annotated();
    j["failed"] = failed();
    j["skipped_existing"] = skipped();
    ordered_json rows = ordered_json::array();
    for (const IconOutcome& o : outcomes) {
        ordered_json row;
        row["file"] = o.file;
        row["path"] = o.path;
        row["icon"] = o.icon_name;
        if (o.skipped_existing) {
            row["status"] = "skipped: already annotated";
        } else if (o.ok()) {
            row["status"] = o.injected ? "annotated" : "dry-run";
            row["alt_text"] = o.alt_text;
            row["mode"] = o.mode;
            row["cached"] = o.cached;
            row["cost_usd"] = o.cost_usd;
            if (o.used_label_fallback) row["label"] = "fallback";
        } else {
            row["status"] = "failed";
            row["error"] = o.error;
        }
        rows.push_back(std::move(row));
    }
    j["icons"] = std::move(rows);
    return j;
}

std::string AnnotateSummary::table() const {
    std::ostringstream out;
    for (const IconOutcome& o : outcomes) {
        out << o.file << " " << o.icon_name << ": ";
        if (o.skipped_existing) {
            out << "skipped (already annotated)";
        } else if (!o.ok()) {
            out << "FAILED: " << o.error;
        } else {
            out << (o.injected ? "\"" : "dry-run \"") << o.alt_text << "\"";
            if (o.cached) out << " (cached)";
        }
        out << "\n";
    }
    out << annotated() << " annotated, " << skipped() << " skipped, " << failed() << " failed\n";
    return out.str();
}

AnnotatePipeline::AnnotatePipeline(const ToolConfig& config, ChatClient& client,
                                   ResultCache* cache, OcrEngine* ocr_engine)
    : config_(config), client_(client), cache_(cache), ocr_engine_(ocr_engine) {}

AnnotatePipeline::Generated AnnotatePipeline::generate_for(
    const LayoutDocument& doc, const LayoutElement& element, const IconCandidate& candidate,
    const std::filesystem::path& project_root) {
    IconContext ctx = extract_context(doc.screen, candidate);

    std::optional<Image> icon_image;
    if (const auto drawable = resolve_drawable(element, project_root)) {
        try {
            icon_image = standardize(load_image(*drawable));
        } catch (const Error&) {
            icon_image.reset();  // unreadable drawable: text-only context
        }
    }

    if (icon_image && ocr_engine_ != nullptr) {
        ctx.in_icon_text =
            ocr_in_icon_text(*icon_image, ocr_engine_, config_.ocr.min_confidence);
    }

    GenerationMode mode = config_.mode;
    bool fallback = false;
    if (mode.variant == Variant::MMT && !icon_image) {
        // No raster to attach (e.g. vector drawable): this icon flows
        // through the text path instead.
        mode.variant = Variant::TextT;
    }
    if (mode.variant == Variant::TextT) {
        if (icon_image) {
            try {
                ctx.icon_label = classify_icon(*icon_image, client_, nullptr, config_.templates);
            } catch (const Error&) {
                fallback = true;  // degrade to a context-only prompt
            }
        } else {
            fallback = true;
        }
    }

    const AltTextResult result =
        generate_alt_text(ctx, icon_image, mode, config_.ablation, client_, cache_,
                          icon_name_of(candidate.node), config_.templates, fallback);

    Generated gen;
    gen.alt_text = result.alt_text;
    gen.mode = mode_name(mode);
    gen.cached = result.cached;
    gen.used_label_fallback = fallback && mode.variant == Variant::TextT;
    gen.cost_usd = result.cost_usd;
    return gen;
}

std::vector<IconOutcome> AnnotatePipeline::annotate_file(
    const std::filesystem::path& layout_path, const std::filesystem::path& project_root,
    const AnnotateOptions& options) {
    std::string bytes = read_file(layout_path);
    const LayoutDocument doc = parse_layout(bytes, std::nullopt, layout_path.string());

    const std::vector<IconCandidate> candidates = detect_icons(doc.screen);
    std::vector<IconOutcome> outcomes(candidates.size());
    std::vector<std::future<Generated>> futures(candidates.size());

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        IconOutcome& outcome = outcomes[i];
        outcome.file = layout_path.string();
        outcome.path = candidates[i].path;
        outcome.icon_name = icon_name_of(candidates[i].node);
        if (candidates[i].node.content_description && !options.force) {
            outcome.skipped_existing = true;
            continue;
        }
        const LayoutElement* element = doc.find(candidates[i].path);
        if (element == nullptr) continue;
        // Generation is parallel per icon; the client's semaphore bounds
        // the number of requests actually in flight.
        futures[i] = std::async(std::launch::async,
                                [this, &doc, element, &candidate = candidates[i], &project_root] {
                                    return generate_for(doc, *element, candidate, project_root);
                                });
    }

    bool changed = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!futures[i].valid()) continue;
        IconOutcome& outcome = outcomes[i];
        const auto started = std::chrono::steady_clock::now();
        try {
            const Generated gen = futures[i].get();
            outcome.alt_text = gen.alt_text;
            outcome.mode = gen.mode;
            outcome.cached = gen.cached;
            outcome.used_label_fallback = gen.used_label_fallback;
            outcome.cost_usd = gen.cost_usd;
            if (!options.dry_run) {
                bytes = inject_alt_text(bytes, candidates[i].path, gen.alt_text, options.force);
                outcome.injected = true;
                changed = true;
            }
        } catch (const Error& e) {
            outcome.error = e.what();
        }
        outcome.latency_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
    }

    if (changed) {
        write_file(layout_path, bytes);
    }
    return outcomes;
}

IconOutcome AnnotatePipeline::annotate_icon(const std::filesystem::path& layout_path,
                                            const std::filesystem::path& project_root,
                                            const IconCandidate& candidate,
                                            const AnnotateOptions& options) {
    IconOutcome outcome;
    outcome.file = layout_path.string();
    outcome.path = candidate.path;
    outcome.icon_name = icon_name_of(candidate.node);
    const auto started = std::chrono::steady_clock::now();

    try {
        const std::string bytes = read_file(layout_path);
        const LayoutDocument doc = parse_layout(bytes, std::nullopt, layout_path.string());
        const LayoutElement* element = relocate(doc, candidate);
        if (element == nullptr) {
            throw Error(Error::Kind::BadPath,
                        "icon '" + outcome.icon_name + "' moved or disappeared before injection");
        }
        outcome.path = element->path;
        const ViewNode& node = node_at_path(doc.screen, element->path);
        if (node.content_description && !options.force) {
            outcome.skipped_existing = true;
            return outcome;
        }

        // Rebuild the candidate from the fresh parse; the watcher's copy
        // may reflect an older version of the tree.
        IconCandidate located;
        located.screen_ref = doc.screen.screen_id;
        located.path = element->path;
        located.node = node;
        if (!element->path.empty()) {
            std::vector<int> parent_path(element->path.begin(), element->path.end() - 1);
            located.parent = node_at_path(doc.screen, parent_path);
        }
        const Generated gen = generate_for(doc, *element, located, project_root);
        outcome.alt_text = gen.alt_text;
        outcome.mode = gen.mode;
        outcome.cached = gen.cached;
        outcome.used_label_fallback = gen.used_label_fallback;
        outcome.cost_usd = gen.cost_usd;

        if (!options.dry_run) {
            // Re-read: the developer may have kept typing while the
            // backend call was in flight.
            std::string current = read_file(layout_path);
            const LayoutDocument fresh = parse_layout(current, std::nullopt, layout_path.string());
            const LayoutElement* target = relocate(fresh, located);
            if (target == nullptr) {
                throw Error(Error::Kind::BadPath,
                            "icon '" + outcome.icon_name + "' moved while generating; not injected");
            }
            current = inject_alt_text(current, target->path, gen.alt_text, options.force);
            write_file(layout_path, current);
            outcome.injected = true;
        }
    } catch (const Error& e) {
        outcome.error = e.what();
    }
    outcome.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return outcome;
}

}  // namespace alticon
