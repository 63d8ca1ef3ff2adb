#include <doctest.h>

#include "alticon/error.hpp"
#include "alticon/json_canon.hpp"
#include "alticon/model.hpp"
#include "test_support.hpp"

using namespace alticon;

namespace {

IconContext sample_context() {
    IconContext ctx;
    ctx.app_activity_name = "com.example.MainActivity";
    ctx.ui_element_info = {"ImageButton", "send_button", std::nullopt};
    ctx.parent = NodeProps{"LinearLayout", "action_bar", std::nullopt};
    ctx.siblings = {NodeProps{"TextView", std::nullopt, "Send"},
                    NodeProps{"ImageView", "attach", std::nullopt}};
    ctx.in_icon_text = {"GO"};
    ctx.icon_label = "paper plane";
    return ctx;
}

}  // namespace

TEST_CASE("node_at_path addresses nodes and names the failing depth") {
    Screen screen;
    screen.root.class_name = "FrameLayout";
    ViewNode a;
    a.class_name = "LinearLayout";
    ViewNode b;
    b.class_name = "ImageButton";
    a.children.push_back(b);
    screen.root.children.push_back(a);

    CHECK(&node_at_path(screen, {}) == &screen.root);
    const std::vector<int> path{0, 0};
    CHECK(node_at_path(screen, path).class_name == "ImageButton");

    const std::vector<int> bad{5};
    try {
        node_at_path(screen, bad);
        FAIL("expected BadPathError");
    } catch (const BadPathError& e) {
        CHECK(e.depth() == 0);
    }
    const std::vector<int> bad_deep{0, 3};
    try {
        node_at_path(screen, bad_deep);
        FAIL("expected BadPathError");
    } catch (const BadPathError& e) {
        CHECK(e.depth() == 1);
    }
}

TEST_CASE("NodeProps drops blank values and never carries contentDescription") {
    ViewNode node;
    node.class_name = "ImageView";
    node.resource_id = "   ";
    node.text = "";
    node.content_description = "secret alt text";
    const NodeProps props = NodeProps::from_node(node);
    CHECK(props.class_name == "ImageView");
    CHECK_FALSE(props.resource_id.has_value());
    CHECK_FALSE(props.text.has_value());
}

TEST_CASE("canonical serialization matches the extracted-context shape") {
    IconContext ctx;
    ctx.app_activity_name = "a.b.C";
    ctx.ui_element_info = {"ImageButton", "rewind", std::nullopt};
    ctx.parent = NodeProps{"LinearLayout", "bar", std::nullopt};

    const std::string json = canonical_context_json(ctx);
    CHECK(json.find("\"parent_node\": [\n    { \"resource_id\": \"bar\" },\n    { \"class\": \"LinearLayout\" }\n  ]") != std::string::npos);
    CHECK(json.find("\"sibling_nodes\": []") != std::string::npos);
    CHECK(json.find("UI_element_info") != std::string::npos);
}

TEST_CASE("icon context round-trips through canonical JSON") {
    const IconContext ctx = sample_context();
    const std::string json = canonical_context_json(ctx);
    const IconContext back = context_from_json(ordered_json::parse(json));
    CHECK(back == ctx);
    CHECK(canonical_context_json(back) == json);
}

TEST_CASE("random contexts round-trip and never leak blanks") {
    testsupport::TreeGen gen(20240801);
    for (int i = 0; i < 200; ++i) {
        const Screen screen = gen.screen();
        // every node in the tree must produce clean NodeProps
        const std::function<void(const ViewNode&)> walk = [&](const ViewNode& node) {
            const NodeProps props = NodeProps::from_node(node);
            for (const auto& field : {props.class_name, props.resource_id, props.text}) {
                if (field) CHECK_FALSE(is_blank(*field));
            }
            for (const ViewNode& child : node.children) walk(child);
        };
        walk(screen.root);
    }
}

TEST_CASE("canonical dump renders inline single-key objects and nested arrays") {
    ordered_json doc;
    doc["empty_obj"] = ordered_json::object();
    doc["empty_arr"] = ordered_json::array();
    doc["single"] = {{"k", "v"}};
    doc["list"] = ordered_json::array({ordered_json{{"a", 1}}, ordered_json{{"a", 1}, {"b", 2}}});
    const std::string out = canonical_dump(doc);
    CHECK(out == R"({
  "empty_obj": {},
  "empty_arr": [],
  "single": { "k": "v" },
  "list": [
    { "a": 1 },
    {
      "a": 1,
      "b": 2
    }
  ]
})");
}

TEST_CASE("mode names") {
    CHECK(mode_name({Variant::TextT, ImageScope::Icon}) == "textt");
    CHECK(mode_name({Variant::MMT, ImageScope::Icon}) == "mmt_i");
    CHECK(mode_name({Variant::MMT, ImageScope::Container}) == "mmt_c");
}
