#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "alticon/config.hpp"
#include "alticon/layout_xml.hpp"

namespace alticon {

struct AnnotateOptions {
    bool dry_run = false;
    bool force = false;  // overwrite existing contentDescription
};

struct IconOutcome {
    std::string file;
    std::vector<int> path;
    std::string icon_name;  // resource id, else class name
    std::string alt_text;
    std::string mode;
    bool injected = false;
    bool skipped_existing = false;
    bool cached = false;
    bool used_label_fallback = false;
    double cost_usd = 0.0;
    double latency_ms = 0.0;
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

struct AnnotateSummary {
    std::vector<IconOutcome> outcomes;

    int annotated() const;
    int failed() const;
    int skipped() const;
    ordered_json to_json() const;
    std::string table() const;
};

/// Orchestrates the per-icon flow: extract context, resolve and prepare
/// the icon image, OCR, zero-shot label (TextT), generate, inject.
/// Generation runs in parallel per icon up to the client's in-flight
/// bound; file rewrites are serialized and elements are re-located by
/// resource id before writing, so a stale path never corrupts a layout.
class AnnotatePipeline {
public:
    AnnotatePipeline(const ToolConfig& config, ChatClient& client, ResultCache* cache,
                     OcrEngine* ocr_engine);

    /// Annotates every icon in one layout file that lacks a
    /// contentDescription. Returns one outcome per detected icon.
    std::vector<IconOutcome> annotate_file(const std::filesystem::path& layout_path,
                                           const std::filesystem::path& project_root,
                                           const AnnotateOptions& options);

    /// Annotates one icon reported by the watcher. The file is re-read and
    /// the element re-located before injection.
    IconOutcome annotate_icon(const std::filesystem::path& layout_path,
                              const std::filesystem::path& project_root,
                              const IconCandidate& candidate, const AnnotateOptions& options);

private:
    struct Generated {
        std::string alt_text;
        std::string mode;
        bool cached = false;
        bool used_label_fallback = false;
        double cost_usd = 0.0;
    };
    Generated generate_for(const LayoutDocument& doc, const LayoutElement& element,
                           const IconCandidate& candidate,
                           const std::filesystem::path& project_root);

    const ToolConfig& config_;
    ChatClient& client_;
    ResultCache* cache_;
    OcrEngine* ocr_engine_;
};

}  // namespace alticon
