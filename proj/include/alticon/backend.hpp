#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "alticon/image.hpp"
#include "alticon/json_canon.hpp"
#include "alticon/prompts.hpp"

namespace alticon {

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{200};
    double backoff_multiplier = 2.0;
};

/// USD per one million tokens. Defaults follow gpt-4o-2024-08-06 pricing.
struct PriceTable {
    double prompt_usd_per_1m = 2.50;
    double completion_usd_per_1m = 10.00;
};

struct BackendConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o-2024-08-06";
    std::string api_key_env = "ALTGEN_API_KEY";
    int max_output_tokens = 32;
    double temperature = 0.0;  // fixed for reproducible prompts/caching
    std::chrono::milliseconds request_timeout{30000};
    RetryPolicy retry;
    PriceTable prices;
    int max_in_flight = 4;
};

double cost_usd(const TokenUsage& usage, const PriceTable& prices);

/// Minimal client for any endpoint speaking the OpenAI-compatible chat
/// completions protocol. Retries per policy; at most max_in_flight
/// requests are outstanding at a time.
class ChatClient {
public:
    explicit ChatClient(BackendConfig config);
    ~ChatClient();

    struct Reply {
        std::string content;
        TokenUsage usage;
    };

    /// One chat request; throws a Backend error carrying the attempt log
    /// once retries are exhausted.
    Reply complete(const std::string& text, const std::optional<ImageAttachment>& image);

    const BackendConfig& config() const noexcept { return config_; }

private:
    struct Impl;
    BackendConfig config_;
    std::unique_ptr<Impl> impl_;
};

/// Content-addressed on-disk store keyed by prompt fingerprint, laid out
/// as cache/<first2>/<fingerprint>.json. Reads are lock-free; writes are
/// serialized.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir);

    struct Entry {
        std::string alt_text;
        TokenUsage usage;
        std::string model;
    };

    std::optional<Entry> get(const std::string& fingerprint) const;
    void put(const std::string& fingerprint, const Entry& entry);

private:
    std::filesystem::path path_for(const std::string& fingerprint) const;

    std::filesystem::path dir_;
    mutable std::mutex write_mu_;
};

/// Strips wrapping quotes and trailing periods and collapses the reply to
/// a single line; generation output feeds metrics, so it has to be clean.
std::string normalize_reply(std::string_view raw);

/// Zero-shot icon classification; the reply is trimmed to one line and
/// responses over 6 words are cut to the first two with a diagnostic.
std::string classify_icon(const Image& icon, ChatClient& client, DiagnosticSink* diags = nullptr,
                          const PromptTemplates& templates = PromptTemplates::builtin());

/// Builds the prompt, consults the cache by fingerprint, and otherwise
/// performs one chat request, recording token usage and USD cost. Cached
/// results return with cached=true and zero cost.
AltTextResult generate_alt_text(const IconContext& ctx, const std::optional<Image>& icon_image,
                                GenerationMode mode, const AblationConfig& ablation,
                                ChatClient& client, ResultCache* cache,
                                const std::string& icon_ref = "",
                                const PromptTemplates& templates = PromptTemplates::builtin(),
                                bool allow_missing_label = false);

struct CostSummary {
    double total_usd = 0.0;
    int total_results = 0;
    int cached_results = 0;
    double cached_usd = 0.0;  // cached repeats always contribute 0
    std::map<std::string, double> usd_by_mode;
    std::map<std::string, int> count_by_mode;

    ordered_json to_json() const;
};

CostSummary account_costs(std::span<const AltTextResult> results);

}  // namespace alticon
