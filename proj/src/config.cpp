#include "alticon/config.hpp"

#include <set>

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

void require_keys(const ordered_json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (allowed.count(it.key()) == 0) {
            throw Error(Error::Kind::Config,
                        "unknown config key at " + where + "/" + it.key());
        }
    }
}

}  // namespace

GenerationMode mode_from_names(std::string_view variant, std::string_view image_scope) {
    GenerationMode mode;
    const std::string v = to_lower(variant);
    if (v == "textt") mode.variant = Variant::TextT;
    else if (v == "mmt") mode.variant = Variant::MMT;
    else throw Error(Error::Kind::Config, "mode must be 'textt' or 'mmt', got '" + v + "'");
    const std::string s = to_lower(image_scope);
    if (s == "icon") mode.image_scope = ImageScope::Icon;
    else if (s == "container") mode.image_scope = ImageScope::Container;
    else throw Error(Error::Kind::Config, "image scope must be 'icon' or 'container', got '" + s + "'");
    return mode;
}

ToolConfig ToolConfig::from_json(const ordered_json& doc) {
    if (!doc.is_object()) {
        throw Error(Error::Kind::Config, "config root must be a JSON object");
    }
    require_keys(doc, "", {"backend", "mode", "ablation", "ocr", "cache_dir", "size_filter",
                           "watch", "seed", "templates"});
    ToolConfig config;

    if (doc.contains("backend")) {
        const auto& b = doc["backend"];
        require_keys(b, "/backend",
                     {"endpoint", "model", "api_key_env", "max_output_tokens", "temperature",
                      "request_timeout_ms", "max_attempts", "initial_backoff_ms",
                      "backoff_multiplier", "prompt_usd_per_1m", "completion_usd_per_1m",
                      "max_in_flight"});
        config.backend.endpoint = b.value("endpoint", config.backend.endpoint);
        config.backend.model = b.value("model", config.backend.model);
        config.backend.api_key_env = b.value("api_key_env", config.backend.api_key_env);
        config.backend.max_output_tokens =
            b.value("max_output_tokens", config.backend.max_output_tokens);
        config.backend.temperature = b.value("temperature", config.backend.temperature);
        config.backend.request_timeout = std::chrono::milliseconds(
            b.value("request_timeout_ms", config.backend.request_timeout.count()));
        config.backend.retry.max_attempts =
            b.value("max_attempts", config.backend.retry.max_attempts);
        config.backend.retry.initial_backoff = std::chrono::milliseconds(
            b.value("initial_backoff_ms", config.backend.retry.initial_backoff.count()));
        config.backend.retry.backoff_multiplier =
            b.value("backoff_multiplier", config.backend.retry.backoff_multiplier);
        config.backend.prices.prompt_usd_per_1m =
            b.value("prompt_usd_per_1m", config.backend.prices.prompt_usd_per_1m);
        config.backend.prices.completion_usd_per_1m =
            b.value("completion_usd_per_1m", config.backend.prices.completion_usd_per_1m);
        config.backend.max_in_flight = b.value("max_in_flight", config.backend.max_in_flight);
        if (config.backend.prices.prompt_usd_per_1m < 0 ||
            config.backend.prices.completion_usd_per_1m < 0) {
            throw Error(Error::Kind::Config, "price table entries must be >= 0");
        }
    }

    if (doc.contains("mode")) {
        const auto& m = doc["mode"];
        require_keys(m, "/mode", {"variant", "image_scope"});
        config.mode = mode_from_names(m.value("variant", std::string{"textt"}),
                                      m.value("image_scope", std::string{"icon"}));
    }

    if (doc.contains("ablation")) {
        const auto& a = doc["ablation"];
        require_keys(a, "/ablation", {"omit_ocr_text", "omit_resource_id", "omit_parent_sibling"});
        config.ablation.omit_ocr_text = a.value("omit_ocr_text", false);
        config.ablation.omit_resource_id = a.value("omit_resource_id", false);
        config.ablation.omit_parent_sibling = a.value("omit_parent_sibling", false);
    }

    if (doc.contains("ocr")) {
        const auto& o = doc["ocr"];
        require_keys(o, "/ocr", {"command", "url", "min_confidence"});
        if (o.contains("command")) config.ocr.command = o["command"].get<std::string>();
        if (o.contains("url")) config.ocr.url = o["url"].get<std::string>();
        config.ocr.min_confidence = o.value("min_confidence", config.ocr.min_confidence);
    }

    if (doc.contains("cache_dir")) {
        config.cache_dir = doc["cache_dir"].get<std::string>();
    }

    if (doc.contains("size_filter")) {
        const auto& f = doc["size_filter"];
        require_keys(f, "/size_filter", {"max_dim_fraction", "max_aspect", "min_side_px"});
        config.size_filter.max_dim_fraction =
            f.value("max_dim_fraction", config.size_filter.max_dim_fraction);
        config.size_filter.max_aspect = f.value("max_aspect", config.size_filter.max_aspect);
        config.size_filter.min_side_px = f.value("min_side_px", config.size_filter.min_side_px);
    }

    if (doc.contains("watch")) {
        const auto& w = doc["watch"];
        require_keys(w, "/watch", {"debounce_ms", "poll_ms", "annotate_on_first_sight"});
        config.watch.debounce =
            std::chrono::milliseconds(w.value("debounce_ms", config.watch.debounce.count()));
        config.watch.poll_interval =
            std::chrono::milliseconds(w.value("poll_ms", config.watch.poll_interval.count()));
        config.watch.annotate_on_first_sight =
            w.value("annotate_on_first_sight", config.watch.annotate_on_first_sight);
    }

    if (doc.contains("seed")) {
        config.seed = doc["seed"].get<std::uint64_t>();
    }

    if (doc.contains("templates")) {
        const auto& t = doc["templates"];
        require_keys(t, "/templates", {"textt", "mmt", "classifier"});
        config.templates.textt = t.value("textt", config.templates.textt);
        config.templates.mmt = t.value("mmt", config.templates.mmt);
        config.templates.classifier = t.value("classifier", config.templates.classifier);
        config.templates.version = "custom";
        config.templates.customized = true;
    }

    return config;
}

ToolConfig ToolConfig::load(const std::filesystem::path& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Kind::Config, "config " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

}  // namespace alticon
