#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alticon/model.hpp"

namespace alticon {

/// Byte range of an element in the original file, used for
/// byte-preserving edits.
struct SourceSpan {
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;
    std::vector<int> element_path;
};

struct RawAttr {
    std::string name;
    std::string value;  // entity-decoded
    std::size_t name_start = 0;
    std::size_t value_start = 0;  // first byte of the value, inside the quotes
    std::size_t value_end = 0;    // byte of the closing quote
};

struct LayoutElement {
    std::vector<int> path;
    std::string tag;
    std::vector<RawAttr> attrs;
    SourceSpan span;
    /// Insertion point for a new attribute: right after the last existing
    /// attribute value (or after the tag name when there are none).
    std::size_t insert_offset = 0;
    bool attrs_multiline = false;
    std::string attr_indent;  // indentation of the last attribute's line

    const RawAttr* find_attr(std::string_view name) const;
};

/// Parsed layout file: the Screen view plus per-element source spans and
/// raw attributes, indexed in document order.
struct LayoutDocument {
    Screen screen;
    std::vector<LayoutElement> elements;

    const LayoutElement* find(std::span<const int> path) const;
};

/// Parses an Android layout XML document. class_name is the element tag,
/// resource_id is android:id with its "@+id/"/"@id/" prefix stripped, and
/// clickable defaults to true for *ImageButton tags. Unknown namespaces
/// and attributes are tolerated. Throws XmlParseError with line/column on
/// malformed input. activity_name falls back to the source filename stem.
LayoutDocument parse_layout(std::string_view xml_bytes,
                            std::optional<std::string> activity_hint = std::nullopt,
                            std::string_view source_name = "");

/// Inserts android:contentDescription="..." after the addressed element's
/// last attribute, matching the surrounding single-line or one-per-line
/// attribute style; every other byte of the document is preserved. Errors
/// if the element already carries a contentDescription unless force is
/// set, in which case the existing value is replaced in place.
std::string inject_alt_text(std::string_view xml_bytes, std::span<const int> element_path,
                            std::string_view alt_text, bool force = false);

std::string xml_escape_attr(std::string_view value);

/// Locates the raster file referenced by android:src / app:srcCompat
/// ("@drawable/NAME" or "@mipmap/NAME") under the project's res/
/// directories, trying density folders in the order: no suffix, -mdpi,
/// -hdpi, -xhdpi, -xxhdpi, -xxxhdpi and extensions png, webp, jpg.
/// Vector XML drawables resolve to nothing.
std::optional<std::filesystem::path> resolve_drawable(const LayoutElement& element,
                                                      const std::filesystem::path& project_root);
std::optional<std::filesystem::path> resolve_drawable_ref(std::string_view ref,
                                                          const std::filesystem::path& project_root);

}  // namespace alticon
