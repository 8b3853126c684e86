#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace conlang {

struct FieldSchema {
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

struct StructuredResponse {
    std::map<std::string, std::string> fields;
    std::string raw;

    const std::string& at(const std::string& name) const { return fields.at(name); }
    bool has(const std::string& name) const { return fields.count(name) != 0; }
    std::string get_or(const std::string& name, std::string fallback = "") const {
        auto it = fields.find(name);
        return it == fields.end() ? fallback : it->second;
    }
};

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingField : FieldError {
    std::string name;
    explicit MissingField(std::string n)
        : FieldError("missing required field: " + n), name(std::move(n)) {}
};
struct DuplicateField : FieldError {
    std::string name;
    explicit DuplicateField(std::string n)
        : FieldError("duplicate field: " + n), name(std::move(n)) {}
};
struct MalformedBlock : FieldError {
    size_t line;  // 1-based line number of the offending fence
    MalformedBlock(std::string what, size_t line_no)
        : FieldError("malformed field block at line " + std::to_string(line_no) +
                     ": " + what),
          line(line_no) {}
};

/// Parses `===FIELD NAME=== ... ===END===` blocks out of model output.
/// Prose outside blocks is ignored; field content is preserved byte-exactly.
StructuredResponse extract_fields(const std::string& raw, const FieldSchema& schema);

/// Emits fields in the same fenced wire format (sorted by name).
std::string emit_fields(const std::map<std::string, std::string>& fields);

/// One-line description of the wire format, quoted in repair prompts.
std::string field_format_help();

}  // namespace conlang
