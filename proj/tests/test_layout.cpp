#include <doctest.h>

#include <atomic>
#include <mutex>
#include <thread>

#include "alticon/error.hpp"
#include "alticon/layout_xml.hpp"
#include "alticon/util.hpp"
#include "alticon/watcher.hpp"
#include "test_support.hpp"

using namespace alticon;

TEST_CASE("parse_layout maps attributes to the node model") {
    SUBCASE("ImageButton with id") {
        const auto doc = parse_layout(R"(<ImageButton android:id="@+id/rewind_button"/>)");
        CHECK(doc.screen.root.class_name == "ImageButton");
        CHECK(doc.screen.root.resource_id == "rewind_button");
        CHECK(doc.screen.root.clickable == true);
    }
    SUBCASE("empty LinearLayout") {
        const auto doc = parse_layout("<LinearLayout/>");
        CHECK(doc.screen.root.class_name == "LinearLayout");
        CHECK(doc.screen.root.children.empty());
        CHECK_FALSE(doc.screen.root.clickable.has_value());
    }
    SUBCASE("clickable ImageView with src") {
        const auto doc = parse_layout(
            R"(<ImageView android:clickable="true" android:src="@drawable/ic_live"/>)");
        CHECK(doc.screen.root.class_name == "ImageView");
        CHECK(doc.screen.root.clickable == true);
        CHECK(doc.elements[0].find_attr("android:src")->value == "@drawable/ic_live");
    }
    SUBCASE("@id/ prefix and text/contentDescription attributes") {
        const auto doc = parse_layout(
            R"(<TextView android:id="@id/title" android:text="Hi &amp; bye"
                        android:contentDescription="greeting"/>)");
        CHECK(doc.screen.root.resource_id == "title");
        CHECK(doc.screen.root.text == "Hi & bye");
        CHECK(doc.screen.root.content_description == "greeting");
    }
    SUBCASE("activity name falls back to the filename stem") {
        const auto doc = parse_layout("<LinearLayout/>", std::nullopt, "res/layout/player.xml");
        CHECK(doc.screen.activity_name == "player");
        const auto hinted = parse_layout("<LinearLayout/>", "MainActivity", "res/layout/a.xml");
        CHECK(hinted.screen.activity_name == "MainActivity");
    }
    SUBCASE("nesting, comments, declaration, namespaces") {
        const std::string xml = testsupport::fixture_text("rewind_layout.xml");
        const auto doc = parse_layout(xml, std::nullopt, "rewind_layout.xml");
        CHECK(doc.screen.root.class_name == "FrameLayout");
        REQUIRE(doc.screen.root.children.size() == 1);
        CHECK(doc.screen.root.children[0].children.size() == 3);
        CHECK(doc.elements.size() == 5);
    }
    SUBCASE("doctype, CDATA, and processing instructions are tolerated") {
        const auto doc = parse_layout(
            "<?xml version=\"1.0\"?>\n<!DOCTYPE layout>\n"
            "<LinearLayout><!-- c --><![CDATA[ <raw> ]]><TextView/></LinearLayout>");
        CHECK(doc.screen.root.class_name == "LinearLayout");
        CHECK(doc.screen.root.children.size() == 1);
    }
    SUBCASE("malformed XML reports line and column") {
        try {
            parse_layout("<LinearLayout>\n  <ImageButton>\n</LinearLayout>");
            FAIL("expected XmlParseError");
        } catch (const XmlParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("ImageButton") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_layout("<A><B/>"), XmlParseError);
        CHECK_THROWS_AS(parse_layout("<A b=unquoted/>"), XmlParseError);
        CHECK_THROWS_AS(parse_layout("<A/><B/>"), XmlParseError);
    }
}

TEST_CASE("inject_alt_text") {
    SUBCASE("single-line element") {
        const std::string xml = R"(<ImageButton android:id="@+id/b"/>)";
        const std::string out = inject_alt_text(xml, std::vector<int>{}, "go back 15 seconds");
        CHECK(out ==
              R"(<ImageButton android:id="@+id/b" android:contentDescription="go back 15 seconds"/>)");
    }
    SUBCASE("escaping") {
        const std::string xml = R"(<ImageButton android:id="@+id/b"/>)";
        const std::string out = inject_alt_text(xml, std::vector<int>{}, R"(a "b" & c)");
        CHECK(out.find(R"(android:contentDescription="a &quot;b&quot; &amp; c")") !=
              std::string::npos);
    }
    SUBCASE("multi-line attribute style matches indentation") {
        const std::string xml =
            "<LinearLayout>\n"
            "    <ImageButton\n"
            "        android:id=\"@+id/b\"\n"
            "        android:layout_width=\"wrap_content\" />\n"
            "</LinearLayout>";
        const std::string out = inject_alt_text(xml, std::vector<int>{0}, "rewind");
        CHECK(out.find("android:layout_width=\"wrap_content\"\n"
                       "        android:contentDescription=\"rewind\" />") != std::string::npos);
    }
    SUBCASE("double injection errors, force replaces") {
        const std::string xml = R"(<ImageButton android:id="@+id/b"/>)";
        const std::string once = inject_alt_text(xml, std::vector<int>{}, "first");
        CHECK_THROWS_AS(inject_alt_text(once, std::vector<int>{}, "second"), Error);
        const std::string forced = inject_alt_text(once, std::vector<int>{}, "second", true);
        CHECK(forced.find("\"second\"") != std::string::npos);
        CHECK(forced.find("\"first\"") == std::string::npos);
    }
    SUBCASE("bad path errors") {
        CHECK_THROWS_AS(inject_alt_text("<A/>", std::vector<int>{2}, "x"), BadPathError);
    }
    SUBCASE("byte preservation on generated layouts (property)") {
        int injected_cases = 0;
        for (std::uint64_t seed = 0; seed < 60 && injected_cases < 40; ++seed) {
            const auto layout = testsupport::generate_layout(seed);
            const LayoutDocument doc = parse_layout(layout.xml);
            for (const auto& path : layout.element_paths) {
                const LayoutElement* el = doc.find(path);
                REQUIRE(el != nullptr);
                if (el->find_attr("android:contentDescription") != nullptr) continue;
                const std::string out = inject_alt_text(layout.xml, path, "alt text value");
                REQUIRE(out.size() > layout.xml.size());
                // locate the single inserted span and textually remove it
                std::size_t i = 0;
                while (i < layout.xml.size() && out[i] == layout.xml[i]) ++i;
                std::string restored = out;
                restored.erase(i, out.size() - layout.xml.size());
                CHECK(restored == layout.xml);
                // parse-after-inject: addressed node gains exactly one description
                const LayoutDocument reparsed = parse_layout(out);
                const ViewNode& node = node_at_path(reparsed.screen, path);
                CHECK(node.content_description == "alt text value");
                ++injected_cases;
            }
        }
        CHECK(injected_cases >= 40);
    }
}

TEST_CASE("resolve_drawable") {
    testsupport::TempDir tmp("drawable");
    const auto touch = [&](const std::string& rel) {
        write_file(tmp.path / rel, "png");
    };

    SUBCASE("direct hit in res/drawable") {
        touch("res/drawable/ic_live.png");
        const auto doc = parse_layout(R"(<ImageView android:src="@drawable/ic_live"/>)");
        const auto path = resolve_drawable(doc.elements[0], tmp.path);
        REQUIRE(path.has_value());
        CHECK(path->filename() == "ic_live.png");
    }
    SUBCASE("vector xml resolves to nothing") {
        touch("res/drawable/ic_vec.xml");
        const auto doc = parse_layout(R"(<ImageView android:src="@drawable/ic_vec"/>)");
        CHECK_FALSE(resolve_drawable(doc.elements[0], tmp.path).has_value());
    }
    SUBCASE("density folder order prefers hdpi over xxhdpi") {
        touch("res/mipmap-hdpi/logo.png");
        touch("res/mipmap-xxhdpi/logo.png");
        const auto doc = parse_layout(R"(<ImageView android:src="@mipmap/logo"/>)");
        const auto path = resolve_drawable(doc.elements[0], tmp.path);
        REQUIRE(path.has_value());
        CHECK(path->string().find("mipmap-hdpi") != std::string::npos);
    }
    SUBCASE("app:srcCompat and nested res roots") {
        write_file(tmp.path / "app/src/main/res/drawable/ic_send.webp", "webp");
        const auto doc = parse_layout(R"(<ImageView app:srcCompat="@drawable/ic_send"/>)");
        const auto path = resolve_drawable(doc.elements[0], tmp.path);
        REQUIRE(path.has_value());
        CHECK(path->filename() == "ic_send.webp");
    }
    SUBCASE("no reference, no result") {
        const auto doc = parse_layout("<ImageView/>");
        CHECK_FALSE(resolve_drawable(doc.elements[0], tmp.path).has_value());
    }
}

TEST_CASE("layout watcher") {
    testsupport::TempDir tmp("watch");
    const auto layout_dir = tmp.path / "res" / "layout";
    std::filesystem::create_directories(layout_dir);
    const auto file = layout_dir / "main.xml";
    write_file(file, "<LinearLayout>\n</LinearLayout>\n");

    std::mutex mu;
    std::vector<WatchEvent> events;
    WatchOptions options;
    options.debounce = std::chrono::milliseconds(50);
    options.poll_interval = std::chrono::milliseconds(10);

    auto watcher = watch_layouts(
        tmp.path,
        [&](const WatchEvent& ev) {
            std::lock_guard<std::mutex> lock(mu);
            events.push_back(ev);
        },
        options);
    watcher->drain();
    {
        std::lock_guard<std::mutex> lock(mu);
        CHECK(events.empty());  // first sighting, annotate_on_first_sight off
    }

    SUBCASE("appending an icon fires exactly one event") {
        write_file(file,
                   "<LinearLayout>\n  <ImageButton android:id=\"@+id/b\"/>\n</LinearLayout>\n");
        watcher->drain();
        std::lock_guard<std::mutex> lock(mu);
        REQUIRE(events.size() == 1);
        CHECK(events[0].kind == WatchEvent::Kind::NewIcon);
        CHECK(events[0].icon->node.resource_id == "b");
    }
    SUBCASE("whitespace-only change fires nothing") {
        write_file(file, "<LinearLayout>\n\n</LinearLayout>\n");
        watcher->drain();
        std::lock_guard<std::mutex> lock(mu);
        CHECK(events.empty());
    }
    SUBCASE("two rapid saves inside the debounce window coalesce") {
        write_file(file, "<LinearLayout>\n</LinearLayout>\n\n");
        write_file(file,
                   "<LinearLayout>\n  <ImageButton android:id=\"@+id/b\"/>\n</LinearLayout>\n");
        watcher->drain();
        std::lock_guard<std::mutex> lock(mu);
        REQUIRE(events.size() == 1);
        CHECK(events[0].kind == WatchEvent::Kind::NewIcon);
    }
    SUBCASE("malformed save diagnoses, fixed save injects") {
        write_file(file, "<LinearLayout>\n  <ImageButton\n</LinearLayout>\n");
        watcher->drain();
        {
            std::lock_guard<std::mutex> lock(mu);
            REQUIRE(events.size() == 1);
            CHECK(events[0].kind == WatchEvent::Kind::Diagnostic);
        }
        write_file(file,
                   "<LinearLayout>\n  <ImageButton android:id=\"@+id/b\"/>\n</LinearLayout>\n");
        watcher->drain();
        std::lock_guard<std::mutex> lock(mu);
        REQUIRE(events.size() == 2);
        CHECK(events[1].kind == WatchEvent::Kind::NewIcon);
    }
    SUBCASE("annotate-on-first-sight reports baseline icons of new files") {
        WatchOptions eager = options;
        eager.annotate_on_first_sight = true;
        std::mutex mu2;
        std::vector<WatchEvent> events2;
        write_file(layout_dir / "fresh.xml",
                   "<LinearLayout>\n  <ImageButton android:id=\"@+id/seen\"/>\n</LinearLayout>\n");
        auto eager_watcher = watch_layouts(
            tmp.path,
            [&](const WatchEvent& ev) {
                std::lock_guard<std::mutex> lock(mu2);
                events2.push_back(ev);
            },
            eager);
        eager_watcher->drain();
        eager_watcher->stop();
        std::lock_guard<std::mutex> lock(mu2);
        REQUIRE(events2.size() == 1);
        CHECK(events2[0].icon->node.resource_id == "seen");
    }
    SUBCASE("non-layout files are ignored") {
        write_file(tmp.path / "res" / "values.xml", "<resources/>");
        write_file(tmp.path / "notes.xml", "<whatever/>");
        watcher->drain();
        std::lock_guard<std::mutex> lock(mu);
        CHECK(events.empty());
    }

    watcher->stop();
}

TEST_CASE("is_watched_layout_path") {
    CHECK(is_watched_layout_path("app/res/layout/main.xml"));
    CHECK(is_watched_layout_path("res/layout-land/main.xml"));
    CHECK_FALSE(is_watched_layout_path("res/values/strings.xml"));
    CHECK_FALSE(is_watched_layout_path("src/layout/main.xml"));
    CHECK_FALSE(is_watched_layout_path("res/layout/main.txt"));
}
