#include "alticon/evalrun.hpp"

#include <cstdio>
#include <sstream>

#include "alticon/error.hpp"
#include "alticon/image_io.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

std::optional<Image> icon_image_of(const AnnotatedIcon& icon, ImageScope scope) {
    const std::optional<std::string>& b64 =
        scope == ImageScope::Container ? icon.container_png_base64 : icon.icon_png_base64;
    if (!b64) return std::nullopt;
    const std::vector<std::uint8_t> png = base64_decode(*b64);
    return decode_image(png);
}

}  // namespace

std::vector<AblationRow> default_ablation_rows() {
    return {
        {"all", {}},
        {"w/o in-icon text (OCR)", {.omit_ocr_text = true}},
        {"w/o icon's resource-id", {.omit_resource_id = true}},
        {"w/o parent & sibling DOM info", {.omit_parent_sibling = true}},
    };
}

GenerationRun generate_candidates(const IconDataset& dataset, GenerationMode mode,
                                  const AblationConfig& ablation, ChatClient& client,
                                  ResultCache* cache, const PromptTemplates& templates) {
    GenerationRun run;
    run.records.reserve(dataset.icons.size());
    for (const AnnotatedIcon& icon : dataset.icons) {
        std::optional<Image> image;
        if (mode.variant == Variant::MMT) {
            image = icon_image_of(icon, mode.image_scope);
            if (!image) {
                throw Error(Error::Kind::Validation,
                            "icon '" + icon.icon_ref +
                                "' has no embedded image; MMT needs one (build the manifest "
                                "with --embed-icons)");
            }
        }
        const bool fallback =
            mode.variant == Variant::TextT && !icon.context.icon_label.has_value();
        if (fallback) run.label_fallbacks += 1;
        AltTextResult result =
            generate_alt_text(icon.context, image, mode, ablation, client, cache, icon.icon_ref,
                              templates, /*allow_missing_label=*/fallback);

        metrics::EvalRecord record;
        record.icon_ref = icon.icon_ref;
        record.candidate = result.alt_text;
        record.references = icon.labels;
        run.records.push_back(std::move(record));
        run.results.push_back(std::move(result));
    }
    return run;
}

ordered_json AblationReport::to_json() const {
    ordered_json j;
    ordered_json grid = ordered_json::array();
    for (const AblationCell& cell : cells) {
        ordered_json row;
        row["mode"] = cell.mode;
        row["input"] = cell.input;
        if (cell.cider) {
            row["cider"] = *cell.cider;
        } else {
            row["cider"] = nullptr;
        }
        row["spice"] = cell.spice;
        if (!cell.error.empty()) row["error"] = cell.error;
        grid.push_back(std::move(row));
    }
    j["grid"] = std::move(grid);
    j["config"] = config_echo;
    return j;
}

std::string AblationReport::table() const {
    std::ostringstream out;
    out << "mode    input                              CIDEr    SPICE\n";
    for (const AblationCell& cell : cells) {
        char buf[160];
        if (cell.ok()) {
            std::snprintf(buf, sizeof(buf), "%-7s %-34s %7.3f  %s\n", cell.mode.c_str(),
                          cell.input.c_str(), *cell.cider, cell.spice.c_str());
        } else {
            std::snprintf(buf, sizeof(buf), "%-7s %-34s failed: %s\n", cell.mode.c_str(),
                          cell.input.c_str(), cell.error.c_str());
        }
        out << buf;
    }
    return out.str();
}

AblationReport run_ablation_suite(const IconDataset& dataset,
                                  const std::vector<GenerationMode>& modes,
                                  const std::vector<AblationRow>& rows, ChatClient& client,
                                  ResultCache* cache, const PromptTemplates& templates,
                                  const metrics::EvalConfig& eval_config) {
    AblationReport report;
    int fallbacks = 0;
    for (const GenerationMode& mode : modes) {
        for (const AblationRow& row : rows) {
            AblationCell cell;
            cell.mode = mode_name(mode);
            cell.input = row.label;
            try {
                GenerationRun run =
                    generate_candidates(dataset, mode, row.config, client, cache, templates);
                fallbacks += run.label_fallbacks;
                metrics::EvalConfig cell_config = eval_config;
                cell_config.extra_echo["ablation"] = {
                    {"omit_ocr_text", row.config.omit_ocr_text},
                    {"omit_resource_id", row.config.omit_resource_id},
                    {"omit_parent_sibling", row.config.omit_parent_sibling}};
                const metrics::MetricReport metrics_report =
                    metrics::evaluate(run.records, cell_config);
                cell.cider = metrics_report.corpus_cider;
            } catch (const Error& e) {
                cell.error = e.what();
            }
            report.cells.push_back(std::move(cell));
        }
    }
    report.config_echo = ordered_json::object();
    report.config_echo["model"] = client.config().model;
    report.config_echo["templates"] = templates.version;
    report.config_echo["textt_label_fallbacks"] = fallbacks;
    report.config_echo["icons"] = dataset.icons.size();
    return report;
}

}  // namespace alticon
