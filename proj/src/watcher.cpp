#include "alticon/watcher.hpp"

#include <atomic>
#include <map>
#include <thread>

#include "alticon/error.hpp"
#include "alticon/layout_xml.hpp"
#include "alticon/util.hpp"

namespace alticon {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

bool is_watched_layout_path(const fs::path& path) {
    if (to_lower(path.extension().string()) != ".xml") return false;
    const fs::path dir = path.parent_path();
    if (dir.filename().string().rfind("layout", 0) != 0) return false;
    return dir.parent_path().filename() == "res";
}

// All file state lives on the watcher thread (the constructor runs the
// baseline scan before the thread starts). drain() only reads atomics.
struct LayoutWatcher::Impl {
    struct FileState {
        std::string content_hash;
        std::optional<Screen> last_parse;
        std::optional<Clock::time_point> dirty_since;
        std::string pending_content;
    };

    fs::path dir;
    Callback callback;
    WatchOptions options;

    std::thread thread;
    std::atomic<bool> stopping{false};
    std::atomic<std::uint64_t> scan_count{0};
    std::atomic<int> dirty_count{0};

    std::map<fs::path, FileState> files;

    void run() {
        while (!stopping.load()) {
            scan_once();
            std::this_thread::sleep_for(options.poll_interval);
        }
    }

    void scan_once() {
        std::error_code ec;
        if (fs::is_directory(dir, ec)) {
            auto it = fs::recursive_directory_iterator(
                dir, fs::directory_options::skip_permission_denied, ec);
            for (const auto& entry : it) {
                if (!entry.is_regular_file(ec) || !is_watched_layout_path(entry.path())) continue;
                std::string content;
                try {
                    content = read_file(entry.path());
                } catch (const Error&) {
                    continue;  // transient unreadable file: retry next poll
                }
                const std::string hash = sha256_hex(content);
                FileState& state = files[entry.path()];
                if (state.content_hash != hash) {
                    state.content_hash = hash;
                    state.pending_content = std::move(content);
                    if (!state.dirty_since) dirty_count.fetch_add(1);
                    state.dirty_since = Clock::now();
                }
            }
        }

        const Clock::time_point now = Clock::now();
        for (auto& [path, state] : files) {
            if (!state.dirty_since || now - *state.dirty_since < options.debounce) continue;
            state.dirty_since.reset();
            process(path, state);
            dirty_count.fetch_sub(1);
        }
        scan_count.fetch_add(1);
    }

    void process(const fs::path& path, FileState& state) {
        Screen parsed;
        try {
            parsed = parse_layout(state.pending_content, std::nullopt, path.string()).screen;
        } catch (const Error& e) {
            WatchEvent ev;
            ev.kind = WatchEvent::Kind::Diagnostic;
            ev.file = path;
            ev.message = e.what();
            callback(ev);
            return;  // keep the last good parse; a later save retries
        }

        std::vector<IconCandidate> added;
        if (state.last_parse) {
            added = diff_new_icons(*state.last_parse, parsed);
        } else if (options.annotate_on_first_sight) {
            added = detect_icons(parsed);
        }
        state.last_parse = std::move(parsed);

        for (IconCandidate& icon : added) {
            WatchEvent ev;
            ev.kind = WatchEvent::Kind::NewIcon;
            ev.file = path;
            ev.icon = std::move(icon);
            callback(ev);
        }
    }
};

LayoutWatcher::LayoutWatcher(fs::path dir, Callback callback, WatchOptions options)
    : impl_(std::make_unique<Impl>()) {
    impl_->dir = std::move(dir);
    impl_->callback = std::move(callback);
    impl_->options = options;
    // Baseline: files present at watch start count as first sightings.
    impl_->scan_once();
    for (auto& [path, state] : impl_->files) {
        if (state.dirty_since) {
            state.dirty_since.reset();
            impl_->process(path, state);
            impl_->dirty_count.fetch_sub(1);
        }
    }
    impl_->thread = std::thread([impl = impl_.get()] { impl->run(); });
}

LayoutWatcher::~LayoutWatcher() { stop(); }

void LayoutWatcher::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->stopping.store(true);
        impl_->thread.join();
    }
}

void LayoutWatcher::drain() {
    if (!impl_) return;
    const auto deadline = Clock::now() + std::chrono::seconds(30);
    // The scan that raises the count to target is guaranteed to have
    // started after this call, so writes made before drain() are seen.
    const std::uint64_t target = impl_->scan_count.load() + 2;
    while (Clock::now() < deadline && !impl_->stopping.load()) {
        if (impl_->scan_count.load() >= target && impl_->dirty_count.load() == 0) return;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
}

std::unique_ptr<LayoutWatcher> watch_layouts(const fs::path& dir, LayoutWatcher::Callback callback,
                                             WatchOptions options) {
    return std::make_unique<LayoutWatcher>(dir, std::move(callback), options);
}

}  // namespace alticon
