#include "alticon/backend.hpp"

#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>

#include "alticon/error.hpp"
#include "alticon/image_io.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

struct EndpointParts {
    std::string base;  // scheme://host[:port]
    std::string path;
};

EndpointParts split_endpoint(const std::string& endpoint) {
    const std::size_t scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(Error::Kind::Config, "backend endpoint must include a scheme: " + endpoint);
    }
    const std::size_t path_pos = endpoint.find('/', scheme_end + 3);
    if (path_pos == std::string::npos) {
        return {endpoint, "/v1/chat/completions"};
    }
    return {endpoint.substr(0, path_pos), endpoint.substr(path_pos)};
}

nlohmann::json request_body(const BackendConfig& config, const std::string& text,
                            const std::optional<ImageAttachment>& image) {
    nlohmann::json message;
    message["role"] = "user";
    if (image) {
        nlohmann::json parts = nlohmann::json::array();
        parts.push_back({{"type", "text"}, {"text", text}});
        const std::string url = "data:" + image->media_type + ";base64," +
                                base64_encode(image->bytes.data(), image->bytes.size());
        parts.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
        message["content"] = std::move(parts);
    } else {
        message["content"] = text;
    }
    nlohmann::json body;
    body["model"] = config.model;
    body["temperature"] = config.temperature;
    body["max_tokens"] = config.max_output_tokens;
    body["messages"] = nlohmann::json::array({std::move(message)});
    return body;
}

}  // namespace

double cost_usd(const TokenUsage& usage, const PriceTable& prices) {
    return usage.prompt_tokens * prices.prompt_usd_per_1m / 1e6 +
           usage.completion_tokens * prices.completion_usd_per_1m / 1e6;
}

struct ChatClient::Impl {
    explicit Impl(int max_in_flight) : in_flight(std::max(1, max_in_flight)) {}
    std::counting_semaphore<> in_flight;
};

ChatClient::ChatClient(BackendConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>(config_.max_in_flight)) {}

ChatClient::~ChatClient() = default;

ChatClient::Reply ChatClient::complete(const std::string& text,
                                       const std::optional<ImageAttachment>& image) {
    const EndpointParts endpoint = split_endpoint(config_.endpoint);
    const std::string body = request_body(config_, text, image).dump();

    impl_->in_flight.acquire();
    struct Release {
        std::counting_semaphore<>& sem;
        ~Release() { sem.release(); }
    } release{impl_->in_flight};

    std::string attempt_log;
    std::chrono::milliseconds backoff = config_.retry.initial_backoff;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(static_cast<long long>(
                static_cast<double>(backoff.count()) * config_.retry.backoff_multiplier));
        }

        httplib::Client client(endpoint.base);
        const auto timeout_s =
            std::chrono::duration_cast<std::chrono::seconds>(config_.request_timeout);
        client.set_read_timeout(std::max<long>(1, timeout_s.count()), 0);
        client.set_connection_timeout(std::max<long>(1, timeout_s.count()), 0);
        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str());
            key != nullptr && *key != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        auto res = client.Post(endpoint.path, headers, body, "application/json");
        if (!res) {
            attempt_log += "attempt " + std::to_string(attempt) + ": transport error (" +
                           httplib::to_string(res.error()) + "); ";
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            attempt_log += "attempt " + std::to_string(attempt) + ": HTTP " +
                           std::to_string(res->status) + "; ";
            continue;
        }
        if (res->status != 200) {
            throw Error(Error::Kind::Backend, "backend returned HTTP " +
                                                  std::to_string(res->status) + ": " + res->body);
        }

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Error::Kind::Backend,
                        std::string("backend reply is not valid JSON: ") + e.what());
        }
        Reply reply;
        if (doc.contains("choices") && !doc["choices"].empty()) {
            const auto& message = doc["choices"][0]["message"];
            if (message.contains("content") && message["content"].is_string()) {
                reply.content = message["content"].get<std::string>();
            }
        }
        if (doc.contains("usage")) {
            reply.usage.prompt_tokens = doc["usage"].value("prompt_tokens", 0LL);
            reply.usage.completion_tokens = doc["usage"].value("completion_tokens", 0LL);
        }
        return reply;
    }
    throw Error(Error::Kind::Backend,
                "backend request failed after " + std::to_string(config_.retry.max_attempts) +
                    " attempts: " + attempt_log);
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ResultCache::path_for(const std::string& fingerprint) const {
    return dir_ / fingerprint.substr(0, 2) / (fingerprint + ".json");
}

std::optional<ResultCache::Entry> ResultCache::get(const std::string& fingerprint) const {
    const std::filesystem::path path = path_for(fingerprint);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
    try {
        const nlohmann::json doc = nlohmann::json::parse(read_file(path));
        Entry entry;
        entry.alt_text = doc.value("alt_text", std::string{});
        entry.usage.prompt_tokens = doc.value("prompt_tokens", 0LL);
        entry.usage.completion_tokens = doc.value("completion_tokens", 0LL);
        entry.model = doc.value("model", std::string{});
        return entry;
    } catch (...) {
        return std::nullopt;  // corrupt entry: treat as a miss
    }
}

void ResultCache::put(const std::string& fingerprint, const Entry& entry) {
    ordered_json doc;
    doc["alt_text"] = entry.alt_text;
    doc["prompt_tokens"] = entry.usage.prompt_tokens;
    doc["completion_tokens"] = entry.usage.completion_tokens;
    doc["model"] = entry.model;
    std::lock_guard<std::mutex> lock(write_mu_);
    write_file(path_for(fingerprint), doc.dump(2) + "\n");
}

std::string normalize_reply(std::string_view raw) {
    std::string text = collapse_whitespace(raw);
    if (text.size() >= 2 && ((text.front() == '"' && text.back() == '"') ||
                             (text.front() == '\'' && text.back() == '\''))) {
        text = text.substr(1, text.size() - 2);
    }
    while (!text.empty() && text.back() == '.') text.pop_back();
    return trim(text);
}

std::string classify_icon(const Image& icon, ChatClient& client, DiagnosticSink* diags,
                          const PromptTemplates& templates) {
    ImageAttachment attachment;
    attachment.bytes = encode_png(icon);
    const ChatClient::Reply reply = client.complete(templates.classifier, attachment);
    std::string label = collapse_whitespace(reply.content);

    const std::vector<std::string> words = split(label, ' ');
    if (words.size() > 6) {
        label = words[0] + " " + words[1];
        diag(diags, "classify_icon",
             "classifier returned " + std::to_string(words.size()) +
                 " words; truncated to the first two");
    }
    return label;
}

AltTextResult generate_alt_text(const IconContext& ctx, const std::optional<Image>& icon_image,
                                GenerationMode mode, const AblationConfig& ablation,
                                ChatClient& client, ResultCache* cache,
                                const std::string& icon_ref, const PromptTemplates& templates,
                                bool allow_missing_label) {
    PromptPayload payload = build_prompt(ctx, mode, ablation, templates, allow_missing_label);
    if (mode.variant == Variant::MMT) {
        if (!icon_image) {
            throw Error(Error::Kind::Validation, "MMT generation requires an image payload");
        }
        ImageAttachment attachment;
        attachment.bytes = encode_png(*icon_image);
        payload.image = std::move(attachment);
    }
    payload.fingerprint = payload_fingerprint(payload, client.config().model);

    AltTextResult result;
    result.icon_ref = icon_ref;
    result.mode = mode;
    result.prompt_fingerprint = payload.fingerprint;

    if (cache != nullptr) {
        if (std::optional<ResultCache::Entry> hit = cache->get(payload.fingerprint)) {
            result.alt_text = hit->alt_text;
            result.token_usage = hit->usage;
            result.cached = true;
            result.cost_usd = 0.0;
            return result;
        }
    }

    const ChatClient::Reply reply = client.complete(payload.text, payload.image);
    result.alt_text = normalize_reply(reply.content);
    if (result.alt_text.empty()) {
        throw Error(Error::Kind::EmptyGeneration, "empty generation for icon '" + icon_ref + "'");
    }
    result.token_usage = reply.usage;
    result.cost_usd = cost_usd(reply.usage, client.config().prices);
    result.cached = false;

    if (cache != nullptr) {
        cache->put(payload.fingerprint,
                   {result.alt_text, result.token_usage, client.config().model});
    }
    return result;
}

ordered_json CostSummary::to_json() const {
    ordered_json j;
    j["total_usd"] = total_usd;
    j["total_results"] = total_results;
    j["cached_results"] = cached_results;
    j["cached_usd"] = cached_usd;
    j["by_mode"] = ordered_json::object();
    for (const auto& [mode, usd] : usd_by_mode) {
        j["by_mode"][mode] = {{"usd", usd}, {"count", count_by_mode.at(mode)}};
    }
    return j;
}

CostSummary account_costs(std::span<const AltTextResult> results) {
    CostSummary summary;
    for (const AltTextResult& r : results) {
        summary.total_usd += r.cost_usd;
        summary.total_results += 1;
        const std::string mode = mode_name(r.mode);
        summary.usd_by_mode[mode] += r.cost_usd;
        summary.count_by_mode[mode] += 1;
        if (r.cached) {
            summary.cached_results += 1;
            summary.cached_usd += r.cost_usd;
        }
    }
    return summary;
}

}  // namespace alticon
