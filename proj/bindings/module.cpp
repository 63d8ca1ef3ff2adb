// Python bindings over the core operations: layout parsing, icon
// detection, context extraction, alt-text injection, prompt rendering,
// image preparation, and the caption metrics. Structured values cross the
// boundary as plain dicts/lists; JSON documents as strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "alticon/dataset.hpp"
#include "alticon/error.hpp"
#include "alticon/extract.hpp"
#include "alticon/image_io.hpp"
#include "alticon/layout_xml.hpp"
#include "alticon/metrics.hpp"
#include "alticon/prompts.hpp"
#include "alticon/util.hpp"

namespace py = pybind11;
using namespace alticon;
namespace m = alticon::metrics;

namespace {

py::object json_to_py(const ordered_json& v) {
    if (v.is_null()) return py::none();
    if (v.is_boolean()) return py::bool_(v.get<bool>());
    if (v.is_number_integer()) return py::int_(v.get<long long>());
    if (v.is_number_unsigned()) return py::int_(v.get<unsigned long long>());
    if (v.is_number_float()) return py::float_(v.get<double>());
    if (v.is_string()) return py::str(v.get<std::string>());
    if (v.is_array()) {
        py::list out;
        for (const auto& item : v) out.append(json_to_py(item));
        return out;
    }
    py::dict out;
    for (auto it = v.begin(); it != v.end(); ++it) {
        out[py::str(it.key())] = json_to_py(it.value());
    }
    return out;
}

ordered_json node_to_json(const ViewNode& node) {
    ordered_json j;
    j["class_name"] = node.class_name;
    if (node.resource_id) j["resource_id"] = *node.resource_id;
    if (node.text) j["text"] = *node.text;
    if (node.content_description) j["content_description"] = *node.content_description;
    if (node.clickable) j["clickable"] = *node.clickable;
    if (node.bounds) {
        j["bounds"] = {node.bounds->left, node.bounds->top, node.bounds->right,
                       node.bounds->bottom};
    }
    ordered_json children = ordered_json::array();
    for (const ViewNode& child : node.children) children.push_back(node_to_json(child));
    j["children"] = std::move(children);
    return j;
}

ViewNode node_from_json(const ordered_json& j) {
    ViewNode node;
    node.class_name = j.value("class_name", std::string{});
    if (j.contains("resource_id")) node.resource_id = j["resource_id"].get<std::string>();
    if (j.contains("text")) node.text = j["text"].get<std::string>();
    if (j.contains("content_description")) {
        node.content_description = j["content_description"].get<std::string>();
    }
    if (j.contains("clickable")) node.clickable = j["clickable"].get<bool>();
    if (j.contains("bounds")) {
        const auto& b = j["bounds"];
        node.bounds = BoundingBox{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(),
                                  b[3].get<int>()};
    }
    if (j.contains("children")) {
        for (const auto& child : j["children"]) node.children.push_back(node_from_json(child));
    }
    return node;
}

ordered_json screen_to_json(const Screen& screen) {
    ordered_json j;
    j["screen_id"] = screen.screen_id;
    j["activity_name"] = screen.activity_name;
    if (screen.screen_dims) {
        j["screen_dims"] = {screen.screen_dims->first, screen.screen_dims->second};
    }
    j["root"] = node_to_json(screen.root);
    return j;
}

Screen screen_from_py(const py::dict& d) {
    const ordered_json j =
        ordered_json::parse(py::str(py::module_::import("json").attr("dumps")(d)).cast<std::string>());
    Screen screen;
    screen.screen_id = j.value("screen_id", std::string{});
    screen.activity_name = j.value("activity_name", std::string{});
    if (j.contains("screen_dims") && j["screen_dims"].is_array()) {
        screen.screen_dims = std::pair<int, int>{j["screen_dims"][0].get<int>(),
                                                 j["screen_dims"][1].get<int>()};
    }
    if (j.contains("root")) screen.root = node_from_json(j["root"]);
    return screen;
}

GenerationMode make_mode(const std::string& mode, const std::string& image_scope) {
    GenerationMode out;
    out.variant = to_lower(mode) == "mmt" ? Variant::MMT : Variant::TextT;
    out.image_scope = to_lower(image_scope) == "container" ? ImageScope::Container
                                                           : ImageScope::Icon;
    return out;
}

std::vector<std::uint8_t> bytes_of(const py::bytes& data) {
    const std::string s = data;
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

py::bytes to_py_bytes(const std::vector<std::uint8_t>& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

}  // namespace

PYBIND11_MODULE(_alticon, mod) {
    mod.doc() = "context-aware alt-text generation for mobile UI icons";
    mod.attr("__version__") = "0.1.0";

    py::register_exception<Error>(mod, "AltIconError");

    mod.def(
        "parse_layout",
        [](const py::bytes& xml, const std::optional<std::string>& activity_hint,
           const std::string& source_name) {
            const std::string data = xml;
            return json_to_py(screen_to_json(parse_layout(data, activity_hint, source_name).screen));
        },
        py::arg("xml"), py::arg("activity_hint") = std::nullopt, py::arg("source_name") = "",
        "Parse an Android layout XML document into a screen dict.");

    mod.def(
        "load_rico_screen",
        [](const std::string& json_doc, const std::string& screen_id) {
            return json_to_py(
                screen_to_json(load_rico_screen(ordered_json::parse(json_doc), screen_id)));
        },
        py::arg("json_doc"), py::arg("screen_id") = "",
        "Map a Rico-format view hierarchy JSON string onto a screen dict.");

    mod.def(
        "detect_icons",
        [](const py::dict& screen) {
            const Screen s = screen_from_py(screen);
            py::list out;
            for (const IconCandidate& c : detect_icons(s)) {
                py::dict item;
                item["path"] = c.path;
                item["class_name"] = c.node.class_name;
                if (c.node.resource_id) item["resource_id"] = *c.node.resource_id;
                out.append(item);
            }
            return out;
        },
        py::arg("screen"), "Clickable icons in document order.");

    mod.def(
        "extract_context",
        [](const py::dict& screen, const std::vector<int>& path) {
            const Screen s = screen_from_py(screen);
            IconCandidate candidate;
            candidate.screen_ref = s.screen_id;
            candidate.path = path;
            candidate.node = node_at_path(s, path);
            if (!path.empty()) {
                const std::vector<int> parent_path(path.begin(), path.end() - 1);
                candidate.parent = node_at_path(s, parent_path);
            }
            return canonical_context_json(extract_context(s, candidate));
        },
        py::arg("screen"), py::arg("path"),
        "Canonical icon-context JSON for the node at the given path.");

    mod.def(
        "inject_alt_text",
        [](const py::bytes& xml, const std::vector<int>& path, const std::string& alt_text,
           bool force) {
            const std::string data = xml;
            const std::string out = inject_alt_text(data, path, alt_text, force);
            return py::bytes(out);
        },
        py::arg("xml"), py::arg("path"), py::arg("alt_text"), py::arg("force") = false,
        "Insert android:contentDescription, preserving every other byte.");

    mod.def(
        "build_prompt",
        [](const std::string& context_json, const std::string& mode,
           const std::string& image_scope, bool omit_ocr_text, bool omit_resource_id,
           bool omit_parent_sibling, bool allow_missing_label) {
            const IconContext ctx = context_from_json(ordered_json::parse(context_json));
            AblationConfig ablation;
            ablation.omit_ocr_text = omit_ocr_text;
            ablation.omit_resource_id = omit_resource_id;
            ablation.omit_parent_sibling = omit_parent_sibling;
            return build_prompt(ctx, make_mode(mode, image_scope), ablation,
                                PromptTemplates::builtin(), allow_missing_label)
                .text;
        },
        py::arg("context_json"), py::arg("mode") = "textt", py::arg("image_scope") = "icon",
        py::arg("omit_ocr_text") = false, py::arg("omit_resource_id") = false,
        py::arg("omit_parent_sibling") = false, py::arg("allow_missing_label") = false,
        "Render the generation prompt for an icon context.");

    mod.def("classifier_prompt", [] { return PromptTemplates::builtin().classifier; });

    mod.def(
        "canonical_context_json",
        [](const std::string& context_json) {
            return canonical_context_json(context_from_json(ordered_json::parse(context_json)));
        },
        py::arg("context_json"), "Re-serialize an icon context in canonical form.");

    mod.def("tokenize", [](const std::string& s) { return m::tokenize(s); }, py::arg("text"));

    const auto tokenize_refs = [](const std::vector<std::string>& refs) {
        std::vector<m::TokenSeq> out;
        out.reserve(refs.size());
        for (const std::string& r : refs) out.push_back(m::tokenize(r));
        return out;
    };
    mod.def(
        "bleu_n",
        [tokenize_refs](const std::string& candidate, const std::vector<std::string>& refs,
                        int n) { return m::bleu_n(m::tokenize(candidate), tokenize_refs(refs), n); },
        py::arg("candidate"), py::arg("references"), py::arg("n") = 1);
    mod.def(
        "rouge_l",
        [tokenize_refs](const std::string& candidate, const std::vector<std::string>& refs) {
            return m::rouge_l(m::tokenize(candidate), tokenize_refs(refs));
        },
        py::arg("candidate"), py::arg("references"));
    mod.def(
        "meteor_lite",
        [tokenize_refs](const std::string& candidate, const std::vector<std::string>& refs) {
            return m::meteor_lite(m::tokenize(candidate), tokenize_refs(refs));
        },
        py::arg("candidate"), py::arg("references"));
    mod.def(
        "cider",
        [tokenize_refs](
            const std::vector<std::pair<std::string, std::vector<std::string>>>& corpus) {
            std::vector<std::pair<m::TokenSeq, std::vector<m::TokenSeq>>> tokenized;
            tokenized.reserve(corpus.size());
            for (const auto& [cand, refs] : corpus) {
                tokenized.emplace_back(m::tokenize(cand), tokenize_refs(refs));
            }
            return m::cider(tokenized);
        },
        py::arg("corpus"), "Per-item CIDEr-D scores with corpus-level document frequencies.");

    mod.def(
        "evaluate",
        [](const std::vector<std::tuple<std::string, std::string, std::vector<std::string>>>&
               records) {
            std::vector<m::EvalRecord> converted;
            converted.reserve(records.size());
            for (const auto& [icon_ref, candidate, refs] : records) {
                converted.push_back({icon_ref, candidate, refs});
            }
            return json_to_py(m::evaluate(converted).to_json());
        },
        py::arg("records"),
        "Full metric report over (icon_ref, candidate, references) records.");

    mod.def(
        "crop_png",
        [](const py::bytes& png, int left, int top, int right, int bottom) {
            const Image img = decode_image(bytes_of(png));
            return to_py_bytes(encode_png(crop_icon(img, {left, top, right, bottom})));
        },
        py::arg("png"), py::arg("left"), py::arg("top"), py::arg("right"), py::arg("bottom"));
    mod.def(
        "standardize_png",
        [](const py::bytes& png) {
            return to_py_bytes(encode_png(standardize(decode_image(bytes_of(png)))));
        },
        py::arg("png"), "Aspect-preserving standardization to 128x128.");
    mod.def(
        "mark_bbox_png",
        [](const py::bytes& png, int left, int top, int right, int bottom) {
            const Image img = decode_image(bytes_of(png));
            return to_py_bytes(encode_png(mark_bbox(img, {left, top, right, bottom})));
        },
        py::arg("png"), py::arg("left"), py::arg("top"), py::arg("right"), py::arg("bottom"),
        "Draw the 3 px red target box used for container-scope inputs.");
}
