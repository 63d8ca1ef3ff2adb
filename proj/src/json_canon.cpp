#include "alticon/json_canon.hpp"

namespace alticon {
namespace {

std::string scalar_dump(const ordered_json& v) {
    // nlohmann applies the standard minimal string escapes; UTF-8 kept raw.
    return v.dump();
}

bool is_scalar(const ordered_json& v) {
    return !v.is_object() && !v.is_array();
}

void dump_value(const ordered_json& v, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent) + 2, ' ');

    if (v.is_object()) {
        if (v.empty()) {
            out += "{}";
            return;
        }
        if (v.size() == 1 && is_scalar(v.begin().value())) {
            out += "{ " + scalar_dump(ordered_json(v.begin().key())) + ": " +
                   scalar_dump(v.begin().value()) + " }";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = v.begin(); it != v.end(); ++it, ++i) {
            out += inner + scalar_dump(ordered_json(it.key())) + ": ";
            dump_value(it.value(), out, indent + 2);
            if (i + 1 < v.size()) out += ",";
            out += "\n";
        }
        out += pad + "}";
    } else if (v.is_array()) {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += inner;
            dump_value(v[i], out, indent + 2);
            if (i + 1 < v.size()) out += ",";
            out += "\n";
        }
        out += pad + "]";
    } else {
        out += scalar_dump(v);
    }
}

}  // namespace

std::string canonical_dump(const ordered_json& value) {
    std::string out;
    dump_value(value, out, 0);
    return out;
}

}  // namespace alticon
