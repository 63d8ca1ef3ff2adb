#include "alticon/layout_xml.hpp"

#include <algorithm>
#include <cctype>

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

bool is_name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '>' && c != '/' && c != '=' &&
           c != '<' && c != '"' && c != '\'';
}

std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] != '&') {
            out.push_back(raw[i++]);
            continue;
        }
        std::size_t end = raw.find(';', i);
        if (end == std::string_view::npos) {
            out.push_back(raw[i++]);
            continue;
        }
        std::string_view entity = raw.substr(i + 1, end - i - 1);
        if (entity == "amp") out.push_back('&');
        else if (entity == "lt") out.push_back('<');
        else if (entity == "gt") out.push_back('>');
        else if (entity == "quot") out.push_back('"');
        else if (entity == "apos") out.push_back('\'');
        else if (!entity.empty() && entity[0] == '#') {
            long code = 0;
            try {
                code = entity[1] == 'x' || entity[1] == 'X'
                           ? std::stol(std::string(entity.substr(2)), nullptr, 16)
                           : std::stol(std::string(entity.substr(1)));
            } catch (...) {
                code = -1;
            }
            if (code >= 0 && code < 128) {
                out.push_back(static_cast<char>(code));
            } else {
                // Keep non-ASCII references verbatim; layouts rarely use them.
                out.append(raw.substr(i, end - i + 1));
            }
        } else {
            out.append(raw.substr(i, end - i + 1));  // unknown entity, keep as written
        }
        i = end + 1;
    }
    return out;
}

std::string stem_of(std::string_view source_name) {
    if (source_name.empty()) return "";
    return std::filesystem::path(source_name).stem().string();
}

class Parser {
public:
    Parser(std::string_view input, std::optional<std::string> activity_hint,
           std::string_view source_name)
        : in_(input), activity_hint_(std::move(activity_hint)), source_name_(source_name) {}

    LayoutDocument run() {
        if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
        while (pos_ < in_.size()) {
            std::size_t lt = in_.find('<', pos_);
            if (lt == std::string_view::npos) break;
            pos_ = lt;
            if (match("<?")) {
                skip_until("?>", "unterminated XML declaration");
            } else if (match("<!--")) {
                skip_until("-->", "unterminated comment");
            } else if (match("<![CDATA[")) {
                skip_until("]]>", "unterminated CDATA section");
            } else if (match("<!")) {
                skip_until(">", "unterminated doctype");
            } else if (match("</")) {
                close_tag();
            } else {
                open_tag();
            }
        }
        if (!open_stack_.empty()) {
            fail(in_.size(), "unexpected end of input: <" + doc_.elements[open_stack_.back()].tag +
                                 "> is not closed");
        }
        if (!root_) {
            fail(in_.size(), "document has no root element");
        }
        doc_.screen.root = std::move(*root_);
        doc_.screen.activity_name = activity_hint_ ? *activity_hint_ : stem_of(source_name_);
        doc_.screen.screen_id =
            source_name_.empty() ? doc_.screen.activity_name : std::string(source_name_);
        return std::move(doc_);
    }

private:
    [[noreturn]] void fail(std::size_t offset, const std::string& message) const {
        int line = 1;
        int col = 1;
        for (std::size_t i = 0; i < offset && i < in_.size(); ++i) {
            if (in_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw XmlParseError(message + " at line " + std::to_string(line) + ", column " +
                                std::to_string(col),
                            line, col);
    }

    bool match(std::string_view token) {
        if (in_.substr(pos_, token.size()) != token) return false;
        pos_ += token.size();
        return true;
    }

    void skip_until(std::string_view token, const char* error) {
        std::size_t end = in_.find(token, pos_);
        if (end == std::string_view::npos) fail(pos_, error);
        pos_ = end + token.size();
    }

    void skip_ws() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (pos_ < in_.size() && is_name_char(in_[pos_])) ++pos_;
        if (pos_ == start) fail(start, "expected a name");
        return std::string(in_.substr(start, pos_ - start));
    }

    void open_tag() {
        const std::size_t start = pos_;  // at '<'; no prefix matched, nothing consumed
        ++pos_;
        LayoutElement el;
        el.span.byte_start = start;
        el.tag = read_name();
        const std::size_t name_end = pos_;

        while (true) {
            skip_ws();
            if (pos_ >= in_.size()) fail(start, "unterminated start tag <" + el.tag + ">");
            if (in_[pos_] == '>') {
                finish_open(el, name_end, /*self_closing=*/false);
                ++pos_;
                return;
            }
            if (in_[pos_] == '/') {
                if (pos_ + 1 >= in_.size() || in_[pos_ + 1] != '>') {
                    fail(pos_, "expected '/>'");
                }
                finish_open(el, name_end, /*self_closing=*/true);
                pos_ += 2;
                doc_.elements[el_index_of_last_].span.byte_end = pos_;
                pop_element();
                return;
            }
            RawAttr attr;
            attr.name_start = pos_;
            attr.name = read_name();
            skip_ws();
            if (pos_ >= in_.size() || in_[pos_] != '=') {
                fail(pos_, "attribute '" + attr.name + "' is missing '='");
            }
            ++pos_;
            skip_ws();
            if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
                fail(pos_, "attribute '" + attr.name + "' is missing a quoted value");
            }
            const char quote = in_[pos_];
            attr.value_start = ++pos_;
            std::size_t end = in_.find(quote, pos_);
            if (end == std::string_view::npos) {
                fail(attr.value_start, "unterminated value for attribute '" + attr.name + "'");
            }
            attr.value_end = end;
            attr.value = decode_entities(in_.substr(attr.value_start, end - attr.value_start));
            pos_ = end + 1;
            for (const RawAttr& existing : el.attrs) {
                if (existing.name == attr.name) {
                    fail(attr.name_start, "duplicate attribute '" + attr.name + "'");
                }
            }
            el.attrs.push_back(std::move(attr));
        }
    }

    void finish_open(LayoutElement& el, std::size_t name_end, bool self_closing) {
        if (root_closed_ && open_stack_.empty()) {
            fail(el.span.byte_start, "multiple root elements");
        }
        el.insert_offset = el.attrs.empty() ? name_end : el.attrs.back().value_end + 1;
        el.attrs_multiline = in_.substr(name_end, el.insert_offset - name_end)
                                 .find('\n') != std::string_view::npos;
        if (el.attrs_multiline) {
            std::size_t line_start = in_.rfind('\n', el.attrs.back().name_start);
            line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
            std::size_t indent_end = line_start;
            while (indent_end < in_.size() && (in_[indent_end] == ' ' || in_[indent_end] == '\t')) {
                ++indent_end;
            }
            el.attr_indent = std::string(in_.substr(line_start, indent_end - line_start));
        }

        el.path = path_;
        el.span.element_path = path_;

        ViewNode node;
        node.class_name = el.tag;
        for (const RawAttr& a : el.attrs) {
            if (a.name == "android:id") {
                std::string id = a.value;
                if (id.rfind("@+id/", 0) == 0) id = id.substr(5);
                else if (id.rfind("@id/", 0) == 0) id = id.substr(4);
                node.resource_id = id;
            } else if (a.name == "android:text") {
                node.text = a.value;
            } else if (a.name == "android:contentDescription") {
                node.content_description = a.value;
            } else if (a.name == "android:clickable") {
                node.clickable = (a.value == "true");
            }
        }
        if (!node.clickable && ends_with(el.tag, "ImageButton")) {
            node.clickable = true;
        }

        el_index_of_last_ = doc_.elements.size();
        doc_.elements.push_back(std::move(el));
        node_stack_.push_back(std::move(node));
        open_stack_.push_back(el_index_of_last_);
        path_.push_back(0);
        if (!self_closing) {
            // '>' position is recorded provisionally; close_tag overwrites it.
            doc_.elements[el_index_of_last_].span.byte_end = pos_ + 1;
        }
    }

    void close_tag() {
        const std::size_t start = pos_ - 2;
        std::string name = read_name();
        skip_ws();
        if (pos_ >= in_.size() || in_[pos_] != '>') fail(pos_, "expected '>' in closing tag");
        ++pos_;
        if (open_stack_.empty()) fail(start, "unmatched closing tag </" + name + ">");
        const LayoutElement& open_el = doc_.elements[open_stack_.back()];
        if (open_el.tag != name) {
            fail(start, "closing tag </" + name + "> does not match <" + open_el.tag + ">");
        }
        doc_.elements[open_stack_.back()].span.byte_end = pos_;
        pop_element();
    }

    void pop_element() {
        path_.pop_back();
        open_stack_.pop_back();
        ViewNode node = std::move(node_stack_.back());
        node_stack_.pop_back();
        if (node_stack_.empty()) {
            root_ = std::move(node);
            root_closed_ = true;
        } else {
            node_stack_.back().children.push_back(std::move(node));
            ++path_.back();
        }
    }

    std::string_view in_;
    std::optional<std::string> activity_hint_;
    std::string_view source_name_;
    std::size_t pos_ = 0;

    LayoutDocument doc_;
    std::vector<int> path_;                 // child index trail; last entry = next child slot
    std::vector<ViewNode> node_stack_;      // nodes under construction
    std::vector<std::size_t> open_stack_;   // element indices of open tags
    std::optional<ViewNode> root_;
    bool root_closed_ = false;
    std::size_t el_index_of_last_ = 0;
};

}  // namespace

const RawAttr* LayoutElement::find_attr(std::string_view name) const {
    for (const RawAttr& a : attrs) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

const LayoutElement* LayoutDocument::find(std::span<const int> path) const {
    for (const LayoutElement& el : elements) {
        if (el.path.size() == path.size() &&
            std::equal(el.path.begin(), el.path.end(), path.begin())) {
            return &el;
        }
    }
    return nullptr;
}

LayoutDocument parse_layout(std::string_view xml_bytes, std::optional<std::string> activity_hint,
                            std::string_view source_name) {
    return Parser(xml_bytes, std::move(activity_hint), source_name).run();
}

std::string xml_escape_attr(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string inject_alt_text(std::string_view xml_bytes, std::span<const int> element_path,
                            std::string_view alt_text, bool force) {
    LayoutDocument doc = parse_layout(xml_bytes);
    node_at_path(doc.screen, element_path);  // throws BadPathError with the failing depth
    const LayoutElement* el = doc.find(element_path);
    if (el == nullptr) {
        throw BadPathError("bad path: no element at the addressed position",
                           static_cast<int>(element_path.size()));
    }

    const std::string escaped = xml_escape_attr(alt_text);
    if (const RawAttr* existing = el->find_attr("android:contentDescription")) {
        if (!force) {
            throw Error(Error::Kind::AlreadyAnnotated,
                        "element <" + el->tag + "> is already annotated with contentDescription");
        }
        std::string out(xml_bytes);
        out.replace(existing->value_start, existing->value_end - existing->value_start, escaped);
        return out;
    }

    std::string insertion;
    if (el->attrs_multiline) {
        insertion = "\n" + el->attr_indent + "android:contentDescription=\"" + escaped + "\"";
    } else {
        insertion = " android:contentDescription=\"" + escaped + "\"";
    }
    std::string out(xml_bytes);
    out.insert(el->insert_offset, insertion);
    return out;
}

std::optional<std::filesystem::path> resolve_drawable_ref(
    std::string_view ref, const std::filesystem::path& project_root) {
    std::string kind;
    if (ref.rfind("@drawable/", 0) == 0) kind = "drawable";
    else if (ref.rfind("@mipmap/", 0) == 0) kind = "mipmap";
    else return std::nullopt;
    const std::string name(ref.substr(ref.find('/') + 1));
    if (name.empty()) return std::nullopt;

    // Collect res/ roots: project_root/res plus any nested res directory
    // (covers app/src/main/res layouts), in a stable order.
    std::vector<std::filesystem::path> res_roots;
    std::error_code ec;
    if (std::filesystem::is_directory(project_root / "res", ec)) {
        res_roots.push_back(project_root / "res");
    }
    if (res_roots.empty() && std::filesystem::is_directory(project_root, ec)) {
        std::vector<std::filesystem::path> found;
        auto it = std::filesystem::recursive_directory_iterator(
            project_root, std::filesystem::directory_options::skip_permission_denied, ec);
        for (const auto& entry : it) {
            if (entry.is_directory(ec) && entry.path().filename() == "res") {
                found.push_back(entry.path());
            }
        }
        std::sort(found.begin(), found.end());
        res_roots = std::move(found);
    }

    static const char* kDensities[] = {"", "-mdpi", "-hdpi", "-xhdpi", "-xxhdpi", "-xxxhdpi"};
    static const char* kExtensions[] = {".png", ".webp", ".jpg"};
    for (const char* density : kDensities) {
        for (const auto& root : res_roots) {
            const std::filesystem::path dir = root / (kind + density);
            for (const char* ext : kExtensions) {
                const std::filesystem::path candidate = dir / (name + ext);
                if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
            }
        }
    }
    return std::nullopt;
}

std::optional<std::filesystem::path> resolve_drawable(
    const LayoutElement& element, const std::filesystem::path& project_root) {
    for (const char* attr : {"android:src", "app:srcCompat"}) {
        if (const RawAttr* a = element.find_attr(attr)) {
            if (auto path = resolve_drawable_ref(a->value, project_root)) return path;
        }
    }
    return std::nullopt;
}

}  // namespace alticon
