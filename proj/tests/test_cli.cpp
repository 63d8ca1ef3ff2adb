#include <doctest.h>

#include "alticon/config.hpp"
#include "alticon/image_io.hpp"
#include "alticon/ocr.hpp"
#include "alticon/error.hpp"
#include "alticon/evalrun.hpp"
#include "alticon/mock_backend.hpp"
#include "alticon/pipeline.hpp"
#include "alticon/util.hpp"
#include "test_support.hpp"

using namespace alticon;

TEST_CASE("config loading") {
    SUBCASE("defaults survive an empty config") {
        const ToolConfig config = ToolConfig::from_json(ordered_json::object());
        CHECK(config.backend.model == "gpt-4o-2024-08-06");
        CHECK(config.backend.temperature == 0.0);
        CHECK(config.backend.max_output_tokens == 32);
        CHECK(config.backend.api_key_env == "ALTGEN_API_KEY");
        CHECK(config.watch.debounce.count() == 300);
        CHECK(config.ocr.min_confidence == doctest::Approx(0.4));
        CHECK_FALSE(config.templates.customized);
    }
    SUBCASE("unknown keys are rejected with their location") {
        try {
            ToolConfig::from_json(ordered_json::parse(R"({"backend":{"modle":"typo"}})"));
            FAIL("expected config error");
        } catch (const Error& e) {
            CHECK(e.kind() == Error::Kind::Config);
            CHECK(std::string(e.what()).find("/backend/modle") != std::string::npos);
        }
        CHECK_THROWS_AS(ToolConfig::from_json(ordered_json::parse(R"({"nope":1})")), Error);
    }
    SUBCASE("values are applied") {
        const ToolConfig config = ToolConfig::from_json(ordered_json::parse(R"({
            "backend": {"model": "local", "prompt_usd_per_1m": 1.0, "max_in_flight": 2},
            "mode": {"variant": "mmt", "image_scope": "container"},
            "ablation": {"omit_ocr_text": true},
            "size_filter": {"min_side_px": 4},
            "watch": {"debounce_ms": 50},
            "seed": 7
        })"));
        CHECK(config.backend.model == "local");
        CHECK(config.mode.variant == Variant::MMT);
        CHECK(config.mode.image_scope == ImageScope::Container);
        CHECK(config.ablation.omit_ocr_text);
        CHECK(config.size_filter.min_side_px == 4);
        CHECK(config.watch.debounce.count() == 50);
        CHECK(config.seed == 7);
    }
    SUBCASE("template override flips the version echo") {
        const ToolConfig config = ToolConfig::from_json(
            ordered_json::parse(R"({"templates":{"classifier":"what is it"}})"));
        CHECK(config.templates.customized);
        CHECK(config.templates.version == "custom");
        CHECK(config.templates.classifier == "what is it");
        CHECK(config.templates.textt == PromptTemplates::builtin().textt);
    }
    SUBCASE("negative prices are rejected") {
        CHECK_THROWS_AS(
            ToolConfig::from_json(ordered_json::parse(R"({"backend":{"prompt_usd_per_1m":-1}})")),
            Error);
    }
}

TEST_CASE("mock fixture parsing") {
    const MockFixture fixture = MockFixture::from_json(ordered_json::parse(R"({
        "rules": [{"pattern": ".*rewind.*", "reply": "go back 15 seconds",
                   "prompt_tokens": 150, "completion_tokens": 4}],
        "default": {"reply": "icon"}
    })"));
    CHECK(fixture.rules.size() == 1);
    CHECK(fixture.rules[0].usage.prompt_tokens == 150);
    REQUIRE(fixture.fallback.has_value());
    CHECK(fixture.fallback->reply == "icon");
}

TEST_CASE("unmatched requests 404 without a default rule") {
    MockFixture fixture;
    fixture.rules.push_back({"never-matches-anything-zzz", "x", {1, 1}});
    MockBackend backend(fixture);
    backend.start();
    BackendConfig config;
    config.endpoint = backend.endpoint();
    config.retry.max_attempts = 1;
    ChatClient client(config);
    CHECK_THROWS_AS(client.complete("hello", std::nullopt), Error);
    CHECK(backend.request_count() == 1);
    backend.stop();
}

TEST_CASE("annotate pipeline end to end against the mock") {
    testsupport::TempDir tmp("annotate");
    const auto layout_dir = tmp.path / "res" / "layout";
    std::filesystem::create_directories(layout_dir);
    const auto layout = layout_dir / "player.xml";
    write_file(layout, testsupport::fixture_text("rewind_layout.xml"));

    // prompts embed sibling ids too, so rules anchor on the icon's own
    // UI_element_info block
    MockFixture fixture;
    fixture.rules.push_back({"\"class_name\": \"ImageButton\",\\s*\"resource_id\": \"rewind_button\"",
                             "go back 15 seconds",
                             {150, 4}});
    fixture.rules.push_back({"\"class_name\": \"ImageButton\",\\s*\"resource_id\": \"background_music_button\"",
                             "toggle background music",
                             {140, 5}});
    MockBackend backend(fixture);
    backend.start();

    ToolConfig config;
    config.backend.endpoint = backend.endpoint();
    config.backend.retry.max_attempts = 2;
    ChatClient client(config.backend);
    AnnotatePipeline pipeline(config, client, nullptr, nullptr);

    SUBCASE("annotates both icons and preserves the rest of the file") {
        const auto outcomes = pipeline.annotate_file(layout, tmp.path, {});
        AnnotateSummary summary{outcomes};
        CHECK(summary.annotated() == 2);
        CHECK(summary.failed() == 0);

        const std::string after = read_file(layout);
        CHECK(after.find("android:contentDescription=\"go back 15 seconds\"") !=
              std::string::npos);
        CHECK(after.find("android:contentDescription=\"toggle background music\"") !=
              std::string::npos);
        // parses cleanly and the ToggleButton stayed untouched
        const LayoutDocument doc = parse_layout(after);
        CHECK_FALSE(
            doc.screen.root.children[0].children[2].content_description.has_value());

        SUBCASE("a second run skips everything") {
            const auto again = pipeline.annotate_file(layout, tmp.path, {});
            CHECK(AnnotateSummary{again}.annotated() == 0);
            CHECK(AnnotateSummary{again}.skipped() == 2);
            CHECK(read_file(layout) == after);
        }
    }
    SUBCASE("dry run leaves the file alone") {
        const std::string before = read_file(layout);
        const auto outcomes = pipeline.annotate_file(layout, tmp.path, {.dry_run = true});
        CHECK(AnnotateSummary{outcomes}.annotated() == 0);
        CHECK(AnnotateSummary{outcomes}.failed() == 0);
        CHECK(read_file(layout) == before);
    }
    SUBCASE("per-icon failure does not halt the rest") {
        MockFixture partial;
        partial.rules.push_back({"\"class_name\": \"ImageButton\",\\s*\"resource_id\": \"rewind_button\"",
                                 "go back 15 seconds",
                                 {150, 4}});
        MockBackend failing(partial);  // music button has no rule -> 404
        failing.start();
        ToolConfig config2;
        config2.backend.endpoint = failing.endpoint();
        config2.backend.retry.max_attempts = 1;
        ChatClient client2(config2.backend);
        AnnotatePipeline pipeline2(config2, client2, nullptr, nullptr);
        const auto outcomes = pipeline2.annotate_file(layout, tmp.path, {});
        AnnotateSummary summary{outcomes};
        CHECK(summary.annotated() == 1);
        CHECK(summary.failed() == 1);
        failing.stop();
    }
    SUBCASE("watch-style single-icon annotation relocates by resource id") {
        const LayoutDocument doc =
            parse_layout(read_file(layout), std::nullopt, layout.string());
        const auto icons = detect_icons(doc.screen);
        const IconCandidate* rewind = nullptr;
        for (const auto& c : icons) {
            if (c.node.resource_id == "rewind_button") rewind = &c;
        }
        REQUIRE(rewind != nullptr);

        // shift the icon's path by prepending a sibling, then annotate with
        // the stale candidate
        IconCandidate stale = *rewind;
        std::string moved = read_file(layout);
        const std::string marker = "<ImageButton\n            android:id=\"@+id/background_music_button\"";
        const std::size_t at = moved.find(marker);
        REQUIRE(at != std::string::npos);
        moved.insert(at, "<TextView android:text=\"pad\"/>\n        ");
        write_file(layout, moved);

        const IconOutcome outcome = pipeline.annotate_icon(layout, tmp.path, stale, {});
        CHECK(outcome.ok());
        CHECK(outcome.injected);
        const LayoutDocument after = parse_layout(read_file(layout));
        bool found = false;
        for (const auto& c : detect_icons(after.screen)) {
            if (c.node.resource_id == "rewind_button") {
                CHECK(c.node.content_description == "go back 15 seconds");
                found = true;
            }
        }
        CHECK(found);
    }
    backend.stop();
}

TEST_CASE("annotate pipeline wires drawable, OCR, and the zero-shot label") {
    testsupport::TempDir tmp("wiring");
    const auto layout_dir = tmp.path / "res" / "layout";
    std::filesystem::create_directories(layout_dir);
    std::filesystem::create_directories(tmp.path / "res" / "drawable");
    write_file(layout_dir / "live.xml",
               "<LinearLayout>\n"
               "    <ImageButton android:id=\"@+id/live_button\" "
               "android:src=\"@drawable/ic_live\"/>\n"
               "</LinearLayout>\n");
    const auto png = encode_png(Image::solid(32, 32, 10, 10, 10));
    write_file(tmp.path / "res" / "drawable" / "ic_live.png",
               std::string(png.begin(), png.end()));

    // rule order: the classifier prompt has no context; the generation
    // prompt must carry both the OCR text and the classified tag
    MockFixture fixture;
    fixture.rules.push_back({"image classifier", "live stream", {60, 2}});
    fixture.rules.push_back(
        {"with tag 'live stream'[\\s\\S]*\"in_icon_text\": \\[\\s*\"Live\"", "watch live stream",
         {150, 4}});
    MockBackend backend(fixture);
    backend.start();

    ToolConfig config;
    config.backend.endpoint = backend.endpoint();
    config.backend.retry.max_attempts = 1;
    ChatClient client(config.backend);
    StubOcrEngine ocr({{" Live ", 0.9}, {"faint", 0.1}});
    AnnotatePipeline pipeline(config, client, nullptr, &ocr);

    const auto outcomes = pipeline.annotate_file(layout_dir / "live.xml", tmp.path, {});
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].ok());
    CHECK(outcomes[0].alt_text == "watch live stream");
    CHECK(outcomes[0].mode == "textt");
    CHECK_FALSE(outcomes[0].used_label_fallback);
    CHECK(backend.request_count() == 2);  // classify + generate
    backend.stop();
}

TEST_CASE("generation run + ablation grid against the mock") {
    // two icons with sentinel resource ids; the mock is sensitive to one
    // sibling token, so ablating parent+sibling changes its answer
    IconDataset dataset;
    for (int i = 0; i < 2; ++i) {
        AnnotatedIcon icon;
        icon.icon_ref = "s#" + std::to_string(i);
        icon.split = Split::Test;
        icon.labels = {"play music"};
        icon.context.app_activity_name = "a.B";
        icon.context.ui_element_info = {"ImageButton", "icon_" + std::to_string(i), std::nullopt};
        icon.context.parent = NodeProps{"LinearLayout", "bar", std::nullopt};
        icon.context.siblings = {NodeProps{"TextView", "SIBTOKEN", std::nullopt}};
        dataset.icons.push_back(icon);
    }

    MockFixture fixture;
    fixture.rules.push_back({"SIBTOKEN", "play music", {20, 3}});
    fixture.fallback = MockRule{".*", "something else", {20, 3}};
    MockBackend backend(fixture);
    backend.start();
    BackendConfig config;
    config.endpoint = backend.endpoint();
    ChatClient client(config);

    SUBCASE("generate_candidates pairs candidates with references") {
        const GenerationRun run = generate_candidates(
            dataset, {Variant::TextT, ImageScope::Icon}, {}, client, nullptr);
        REQUIRE(run.records.size() == 2);
        CHECK(run.records[0].candidate == "play music");
        CHECK(run.records[0].references == std::vector<std::string>{"play music"});
        CHECK(run.label_fallbacks == 2);  // no labels in these contexts
    }
    SUBCASE("ablating parent+sibling flips the sentinel-sensitive cell") {
        const AblationReport report = run_ablation_suite(
            dataset, {{Variant::TextT, ImageScope::Icon}}, default_ablation_rows(), client,
            nullptr);
        REQUIRE(report.cells.size() == 4);
        for (const AblationCell& cell : report.cells) {
            REQUIRE(cell.ok());
        }
        CHECK(*report.cells[0].cider > *report.cells[3].cider);  // all > w/o parent&sibling
        CHECK(*report.cells[0].cider == *report.cells[1].cider); // OCR removal changes nothing here
        CHECK(report.cells[0].spice == "n/a");
    }
    SUBCASE("MMT without embedded images fails the cell but not the grid") {
        const AblationReport report = run_ablation_suite(
            dataset, {{Variant::MMT, ImageScope::Icon}}, {{"all", {}}}, client, nullptr);
        REQUIRE(report.cells.size() == 1);
        CHECK_FALSE(report.cells[0].ok());
        CHECK(report.cells[0].error.find("embedded image") != std::string::npos);
    }
    backend.stop();
}
