#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "alticon/layout_xml.hpp"
#include "alticon/model.hpp"
#include "alticon/util.hpp"

#ifndef ALTICON_FIXTURE_DIR
#define ALTICON_FIXTURE_DIR "tests/fixtures"
#endif

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(ALTICON_FIXTURE_DIR) / name;
}

inline std::string fixture_text(const std::string& name) {
    return alticon::read_file(fixture(name));
}

/// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("alticon_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

private:
    static int& counter() {
        static int n = 0;
        return n;
    }
};

/// Deterministic random view trees for property tests.
class TreeGen {
public:
    explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next() { return rng_(); }
    int pick(int bound) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(bound)); }
    bool chance(int percent) { return pick(100) < percent; }

    std::string word() {
        static const char* kWords[] = {"play",  "music", "rewind", "delete", "send",
                                       "photo", "star",  "volume", "hide",   "profile"};
        return kWords[pick(10)];
    }

    std::string maybe_blank_string() {
        const int roll = pick(4);
        if (roll == 0) return "";
        if (roll == 1) return "   ";
        return word();
    }

    alticon::ViewNode node(int depth) {
        alticon::ViewNode n;
        static const char* kClasses[] = {"android.widget.ImageView",
                                         "ImageButton",
                                         "androidx.appcompat.widget.AppCompatImageButton",
                                         "TextView",
                                         "LinearLayout",
                                         "android.widget.FrameLayout",
                                         "ToggleButton"};
        n.class_name = kClasses[pick(7)];
        if (chance(70)) n.resource_id = maybe_blank_string();
        if (chance(40)) n.text = maybe_blank_string();
        if (chance(20)) n.content_description = word();
        if (chance(60)) n.clickable = chance(50);
        if (chance(70)) {
            const int l = pick(500);
            const int t = pick(900);
            n.bounds = alticon::BoundingBox{l, t, l + 1 + pick(400), t + 1 + pick(400)};
        }
        if (depth < 3) {
            const int kids = pick(4);
            for (int i = 0; i < kids; ++i) n.children.push_back(node(depth + 1));
        }
        return n;
    }

    alticon::Screen screen() {
        alticon::Screen s;
        s.screen_id = "screen_" + std::to_string(pick(1000));
        s.activity_name = "com.example." + word() + "Activity";
        s.root = node(0);
        return s;
    }

private:
    std::mt19937_64 rng_;
};

/// Random well-formed layout XML plus the paths of its elements, for
/// injection property tests.
struct GeneratedLayout {
    std::string xml;
    std::vector<std::vector<int>> element_paths;
};

inline GeneratedLayout generate_layout(std::uint64_t seed) {
    TreeGen gen(seed);
    GeneratedLayout out;
    std::string& xml = out.xml;
    if (gen.chance(50)) xml += "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";

    const std::function<void(int, std::vector<int>&, int)> emit =
        [&](int depth, std::vector<int>& path, int indent) {
        static const char* kTags[] = {"LinearLayout", "ImageButton", "ImageView", "TextView"};
        const std::string tag = kTags[gen.pick(4)];
        const std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
        out.element_paths.push_back(path);

        xml += pad + "<" + tag;
        const bool multiline = gen.chance(40);
        const int attr_count = gen.pick(3);
        std::vector<std::string> attrs;
        if (gen.chance(80)) {
            attrs.push_back("android:id=\"@+id/el" + std::to_string(gen.pick(10000)) + "\"");
        }
        for (int i = 0; i < attr_count; ++i) {
            attrs.push_back("android:attr" + std::to_string(i) + "=\"" + gen.word() + "\"");
        }
        if (gen.chance(20)) {
            attrs.push_back("android:contentDescription=\"" + gen.word() + "\"");
        }
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            if (multiline) {
                xml += "\n" + pad + "    " + attrs[i];
            } else {
                xml += " " + attrs[i];
            }
        }
        const bool has_children = depth < 2 && gen.chance(50);
        if (!has_children) {
            xml += gen.chance(50) ? "/>" : " />";
            xml += "\n";
            return;
        }
        xml += ">\n";
        const int kids = 1 + gen.pick(3);
        for (int i = 0; i < kids; ++i) {
            path.push_back(i);
            emit(depth + 1, path, indent + 1);
            path.pop_back();
        }
        xml += pad + "</" + tag + ">\n";
    };

    std::vector<int> path;
    emit(0, path, 0);
    return out;
}

}  // namespace testsupport
