#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "alticon/json_canon.hpp"
#include "alticon/model.hpp"

namespace alticon {

/// Scripted behavior for the offline mock backend: the first rule whose
/// regex matches the request's prompt text wins; an optional default
/// answers everything else (otherwise unmatched requests get a 404).
struct MockRule {
    std::string pattern;
    std::string reply;
    TokenUsage usage{10, 2};
};

struct MockFixture {
    std::vector<MockRule> rules;
    std::optional<MockRule> fallback;

    static MockFixture from_json(const ordered_json& doc);
    static MockFixture load(const std::filesystem::path& path);
};

/// Local HTTP server speaking the chat completions protocol, with a
/// request log for assertions:
///   POST /v1/chat/completions   scripted reply + synthetic token usage
///   GET  /__log                 {"requests": N, "entries": [...]}
/// Deterministic for a fixed fixture.
class MockBackend {
public:
    explicit MockBackend(MockFixture fixture);
    ~MockBackend();

    MockBackend(const MockBackend&) = delete;
    MockBackend& operator=(const MockBackend&) = delete;

    /// Binds to the port (0 picks an ephemeral one) and serves on a
    /// background thread.
    void start(int port = 0);
    void stop();

    int port() const;
    std::string endpoint() const;  // http://127.0.0.1:<port>/v1/chat/completions

    std::size_t request_count() const;
    ordered_json log_json() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace alticon
