#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "alticon/extract.hpp"

namespace alticon {

struct WatchEvent {
    enum class Kind { NewIcon, Diagnostic };

    Kind kind = Kind::Diagnostic;
    std::filesystem::path file;
    std::optional<IconCandidate> icon;  // set for NewIcon
    std::string message;                // set for Diagnostic
};

struct WatchOptions {
    std::chrono::milliseconds debounce{300};
    std::chrono::milliseconds poll_interval{100};
    /// When a file is first seen, treat its existing icons as new.
    bool annotate_on_first_sight = false;
};

/// Polls res/layout*/ *.xml files under a directory and reports newly
/// added icons per file after the debounce window. Events are delivered
/// on a single watcher thread, strictly in order; a file that fails to
/// parse produces a diagnostic and the watcher stays alive. Stops on
/// destruction.
class LayoutWatcher {
public:
    using Callback = std::function<void(const WatchEvent&)>;

    LayoutWatcher(std::filesystem::path dir, Callback callback, WatchOptions options);
    ~LayoutWatcher();

    LayoutWatcher(const LayoutWatcher&) = delete;
    LayoutWatcher& operator=(const LayoutWatcher&) = delete;

    void stop();
    /// Blocks until every pending change has been debounced and delivered.
    void drain();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// True for paths of the form .../res/layout*/NAME.xml.
bool is_watched_layout_path(const std::filesystem::path& path);

std::unique_ptr<LayoutWatcher> watch_layouts(const std::filesystem::path& dir,
                                             LayoutWatcher::Callback callback,
                                             WatchOptions options = {});

}  // namespace alticon
