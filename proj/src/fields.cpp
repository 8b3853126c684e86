#include "conlang/fields.hpp"

#include <algorithm>

#include "conlang/util.hpp"

namespace conlang {

namespace {

bool is_field_name(const std::string& s) {
    if (s.empty()) return false;
    if (!(s[0] >= 'A' && s[0] <= 'Z')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

// Returns the field name if the line is exactly an opening fence, else "".
std::string opening_fence_name(const std::string& line) {
    std::string t = trim(line);
    const std::string prefix = "===FIELD ";
    const std::string suffix = "===";
    if (t.size() <= prefix.size() + suffix.size()) return "";
    if (t.compare(0, prefix.size(), prefix) != 0) return "";
    if (t.compare(t.size() - suffix.size(), suffix.size(), suffix) != 0) return "";
    std::string name = t.substr(prefix.size(), t.size() - prefix.size() - suffix.size());
    return is_field_name(name) ? name : "";
}

bool is_closing_fence(const std::string& line) { return trim(line) == "===END==="; }

}  // namespace

StructuredResponse extract_fields(const std::string& raw, const FieldSchema& schema) {
    StructuredResponse resp;
    resp.raw = raw;

    std::vector<std::string> lines = split_lines(raw);
    std::string open;  // name of the currently open field, empty if none
    size_t open_line = 0;
    std::vector<std::string> content;
    for (size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        std::string name = opening_fence_name(line);
        if (!name.empty()) {
            if (!open.empty())
                throw MalformedBlock("fence for " + name + " opened inside " + open, i + 1);
            if (resp.fields.count(name)) throw DuplicateField(name);
            open = name;
            open_line = i + 1;
            content.clear();
            continue;
        }
        if (is_closing_fence(line)) {
            if (open.empty()) throw MalformedBlock("===END=== without an open field", i + 1);
            std::string joined;
            for (size_t k = 0; k < content.size(); ++k) {
                if (k) joined += '\n';
                joined += content[k];
            }
            resp.fields[open] = std::move(joined);
            open.clear();
            continue;
        }
        if (!open.empty()) content.push_back(line);
    }
    if (!open.empty())
        throw MalformedBlock("unterminated field " + open, open_line);

    for (const std::string& req : schema.required) {
        auto it = resp.fields.find(req);
        if (it == resp.fields.end() || trim(it->second).empty())
            throw MissingField(req);
    }
    return resp;
}

std::string emit_fields(const std::map<std::string, std::string>& fields) {
    std::string out;
    for (const auto& [name, value] : fields) {
        out += "===FIELD " + name + "===\n";
        out += value;
        out += "\n===END===\n";
    }
    return out;
}

std::string field_format_help() {
    return "Output each field as a fenced block:\n"
           "===FIELD NAME===\n<content>\n===END===\n"
           "Field names are uppercase ASCII identifiers. Do not nest blocks.";
}

}  // namespace conlang
