#include "alticon/mock_backend.hpp"

#include <atomic>
#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

// Concatenated text parts of every message, which is what rules match on.
std::string prompt_text_of(const nlohmann::json& body) {
    std::string text;
    if (!body.contains("messages") || !body["messages"].is_array()) return text;
    for (const auto& message : body["messages"]) {
        if (!message.contains("content")) continue;
        const auto& content = message["content"];
        if (content.is_string()) {
            text += content.get<std::string>();
        } else if (content.is_array()) {
            for (const auto& part : content) {
                if (part.value("type", std::string{}) == "text") {
                    text += part.value("text", std::string{});
                }
            }
        }
        text += "\n";
    }
    return text;
}

bool has_image(const nlohmann::json& body) {
    if (!body.contains("messages") || !body["messages"].is_array()) return false;
    for (const auto& message : body["messages"]) {
        if (message.contains("content") && message["content"].is_array()) {
            for (const auto& part : message["content"]) {
                if (part.value("type", std::string{}) == "image_url") return true;
            }
        }
    }
    return false;
}

}  // namespace

MockFixture MockFixture::from_json(const ordered_json& doc) {
    MockFixture fixture;
    const auto parse_rule = [](const ordered_json& j) {
        MockRule rule;
        rule.pattern = j.value("pattern", std::string{".*"});
        rule.reply = j.value("reply", std::string{});
        rule.usage.prompt_tokens = j.value("prompt_tokens", 10LL);
        rule.usage.completion_tokens = j.value("completion_tokens", 2LL);
        return rule;
    };
    if (doc.contains("rules")) {
        for (const auto& j : doc["rules"]) fixture.rules.push_back(parse_rule(j));
    }
    if (doc.contains("default")) {
        fixture.fallback = parse_rule(doc["default"]);
    }
    return fixture;
}

MockFixture MockFixture::load(const std::filesystem::path& path) {
    return from_json(ordered_json::parse(read_file(path)));
}

struct MockBackend::Impl {
    MockFixture fixture;
    std::vector<std::regex> compiled;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    mutable std::mutex mu;
    std::vector<ordered_json> log;

    explicit Impl(MockFixture f) : fixture(std::move(f)) {
        for (const MockRule& rule : fixture.rules) {
            compiled.emplace_back(rule.pattern);
        }

        server.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
            nlohmann::json body;
            try {
                body = nlohmann::json::parse(req.body);
            } catch (const nlohmann::json::exception&) {
                res.status = 400;
                res.set_content(R"({"error":"invalid JSON"})", "application/json");
                return;
            }
            const std::string prompt = prompt_text_of(body);

            const MockRule* matched = nullptr;
            int matched_index = -1;
            for (std::size_t i = 0; i < compiled.size(); ++i) {
                if (std::regex_search(prompt, compiled[i])) {
                    matched = &fixture.rules[i];
                    matched_index = static_cast<int>(i);
                    break;
                }
            }
            if (matched == nullptr && fixture.fallback) {
                matched = &*fixture.fallback;
            }

            {
                std::lock_guard<std::mutex> lock(mu);
                ordered_json entry;
                entry["model"] = body.value("model", std::string{});
                entry["has_image"] = has_image(body);
                entry["matched_rule"] = matched_index;
                entry["prompt_sha256"] = sha256_hex(prompt);
                log.push_back(std::move(entry));
            }

            if (matched == nullptr) {
                res.status = 404;
                res.set_content(R"({"error":"no fixture rule matched"})", "application/json");
                return;
            }

            nlohmann::json reply;
            reply["id"] = "mock-" + std::to_string(log.size());
            reply["object"] = "chat.completion";
            reply["model"] = body.value("model", std::string{"mock"});
            reply["choices"] = nlohmann::json::array(
                {{{"index", 0},
                  {"message", {{"role", "assistant"}, {"content", matched->reply}}},
                  {"finish_reason", "stop"}}});
            reply["usage"] = {{"prompt_tokens", matched->usage.prompt_tokens},
                              {"completion_tokens", matched->usage.completion_tokens},
                              {"total_tokens", matched->usage.prompt_tokens +
                                                   matched->usage.completion_tokens}};
            res.set_content(reply.dump(), "application/json");
        });

        server.Get("/__log", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(log_json_locked().dump(2), "application/json");
        });
        server.Get("/__health", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("ok", "text/plain");
        });
    }

    ordered_json log_json_locked() const {
        std::lock_guard<std::mutex> lock(mu);
        ordered_json j;
        j["requests"] = log.size();
        j["entries"] = log;
        return j;
    }
};

MockBackend::MockBackend(MockFixture fixture) : impl_(std::make_unique<Impl>(std::move(fixture))) {}

MockBackend::~MockBackend() { stop(); }

void MockBackend::start(int port) {
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port)) {
            throw Error(Error::Kind::Io, "mock backend: cannot bind port " + std::to_string(port));
        }
        impl_->port = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void MockBackend::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

int MockBackend::port() const { return impl_->port; }

std::string MockBackend::endpoint() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1/chat/completions";
}

std::size_t MockBackend::request_count() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->log.size();
}

ordered_json MockBackend::log_json() const { return impl_->log_json_locked(); }

}  // namespace alticon
