#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace alticon {

using ordered_json = nlohmann::ordered_json;

/// Canonical JSON layout used for prompts, caches, and golden fixtures:
/// UTF-8, two-space indent, insertion key order, one array element per
/// line, and objects holding a single scalar member rendered inline as
/// `{ "key": value }`. Deterministic for a given document.
std::string canonical_dump(const ordered_json& value);

}  // namespace alticon
