#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alticon/backend.hpp"
#include "alticon/dataset.hpp"
#include "alticon/metrics.hpp"

namespace alticon {

/// One Table-4-style input row: a label plus the components withheld.
struct AblationRow {
    std::string label;
    AblationConfig config;
};

/// all input, w/o in-icon text (OCR), w/o icon's resource-id,
/// w/o parent & sibling DOM info.
std::vector<AblationRow> default_ablation_rows();

/// Generates one candidate per dataset icon under a mode + ablation and
/// pairs it with the icon's reference labels.
struct GenerationRun {
    std::vector<metrics::EvalRecord> records;
    std::vector<AltTextResult> results;
    int label_fallbacks = 0;  // TextT prompts rendered without a label
};

GenerationRun generate_candidates(const IconDataset& dataset, GenerationMode mode,
                                  const AblationConfig& ablation, ChatClient& client,
                                  ResultCache* cache,
                                  const PromptTemplates& templates = PromptTemplates::builtin());

struct AblationCell {
    std::string mode;
    std::string input;
    std::optional<double> cider;
    std::string spice = "n/a";  // SPICE is out of scope; the slot stays visible
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

struct AblationReport {
    std::vector<AblationCell> cells;
    ordered_json config_echo;

    ordered_json to_json() const;
    std::string table() const;
};

/// The ablation grid: for every (mode, row) cell, regenerate alt-text
/// under that ablation and evaluate. Per-cell failures are annotated and
/// the rest of the grid still runs.
AblationReport run_ablation_suite(const IconDataset& dataset,
                                  const std::vector<GenerationMode>& modes,
                                  const std::vector<AblationRow>& rows, ChatClient& client,
                                  ResultCache* cache,
                                  const PromptTemplates& templates = PromptTemplates::builtin(),
                                  const metrics::EvalConfig& eval_config = {});

}  // namespace alticon
