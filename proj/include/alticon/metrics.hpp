#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alticon/json_canon.hpp"

namespace alticon::metrics {

using TokenSeq = std::vector<std::string>;

inline constexpr std::string_view kTokenizerVersion = "v1-lower-asciipunct";

/// Lowercases, splits on whitespace, strips leading/trailing ASCII
/// punctuation per token, and drops empties. Internal punctuation
/// ("hide-profile") is kept.
TokenSeq tokenize(std::string_view s);

/// Sentence BLEU-n (n = 1 or 2): clipped modified n-gram precision,
/// geometric mean over orders 1..n, brevity penalty exp(1 - r/c) against
/// the closest reference length. Empty candidates score 0.
double bleu_n(const TokenSeq& candidate, const std::vector<TokenSeq>& refs, int n);

/// Token-level LCS F-measure with beta = 1.2, max over references.
double rouge_l(const TokenSeq& candidate, const std::vector<TokenSeq>& refs);

/// Word groups considered synonymous during METEOR-lite alignment. The
/// table is a flat text file, one whitespace-separated group per line;
/// the default is empty.
struct SynonymTable {
    std::map<std::string, int> group_of;

    static SynonymTable load(const std::filesystem::path& path);
    bool related(const std::string& a, const std::string& b) const;
    bool empty() const noexcept { return group_of.empty(); }
};

/// Suffix stem used by the METEOR-lite stem stage: strips one of
/// ing/ed/es/s, then one trailing 'e'.
std::string light_stem(std::string_view word);

/// Simplified METEOR: staged unigram alignment (exact, stem, synonym),
/// F_mean = P*R / (alpha*P + (1-alpha)*R) with alpha = 0.9, fragmentation
/// penalty 0.5 * (chunks/matches)^3, max over references. Reported as
/// "meteor_lite"; it does not claim parity with WordNet METEOR.
double meteor_lite(const TokenSeq& candidate, const std::vector<TokenSeq>& refs,
                   const SynonymTable& synonyms = {});

struct CiderParams {
    double sigma = 6.0;
    /// IDF is log((N + epsilon) / df); the epsilon keeps a singleton
    /// corpus from collapsing to all-zero vectors.
    double epsilon = 1e-6;
};

/// CIDEr-D over n-grams n = 1..4 with corpus-level document frequencies:
/// per-n clipped TF-IDF cosine, Gaussian length penalty
/// exp(-(lc-lr)^2 / (2 sigma^2)), averaged over n and references, x10.
/// Returns one score per corpus item, each in [0, 10].
std::vector<double> cider(const std::vector<std::pair<TokenSeq, std::vector<TokenSeq>>>& corpus,
                          const CiderParams& params = {});

struct EvalRecord {
    std::string icon_ref;
    std::string candidate;
    std::vector<std::string> references;  // 1..3
};

struct ItemScores {
    std::string icon_ref;
    double bleu1 = 0.0;
    double bleu2 = 0.0;
    double rouge_l = 0.0;
    double meteor_lite = 0.0;
    double cider = 0.0;
};

struct EvalConfig {
    SynonymTable synonyms;
    std::string synonyms_source = "none";
    CiderParams cider;
    /// Extra config echoed verbatim into the report (e.g. ablation flags).
    ordered_json extra_echo = ordered_json::object();
};

/// Per-item scores plus corpus aggregates. BLEU corpus scores use the
/// standard corpus-level aggregation; ROUGE/METEOR/CIDEr corpus scores
/// are arithmetic means of the per-item scores.
struct MetricReport {
    std::vector<ItemScores> items;
    double corpus_bleu1 = 0.0;
    double corpus_bleu2 = 0.0;
    double corpus_rouge_l = 0.0;
    double corpus_meteor_lite = 0.0;
    double corpus_cider = 0.0;
    int reference_count = 0;
    ordered_json config_echo;

    ordered_json to_json() const;
    std::string table() const;  // human-readable summary
};

/// Runs all five metrics over the records. Empty input is an error; so is
/// a record without references.
MetricReport evaluate(const std::vector<EvalRecord>& records, const EvalConfig& config = {});

}  // namespace alticon::metrics
