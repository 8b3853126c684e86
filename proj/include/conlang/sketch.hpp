#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conlang {

enum class SectionKind { phonology, grammar, lexicon };

const char* to_string(SectionKind kind);
SectionKind section_kind_from_string(const std::string& name);

enum class BlockKind { header, body };

struct TextBlock {
    BlockKind kind;
    std::string text;  // non-empty
};

struct Section {
    SectionKind kind;
    std::vector<TextBlock> blocks;
};

struct ProvenanceEntry {
    std::string stage;
    std::string timestamp;
    std::string model_id;
    std::string summary;
};

struct SketchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyAppend : SketchError {
    EmptyAppend() : SketchError("append called with an empty block list") {}
};

/// The language sketch: a versioned, immutable snapshot of one conlang.
/// Mutating operations return a new snapshot with version+1.
struct LanguageSketch {
    std::string id;
    uint64_t seed = 0;
    std::string user_constraint;
    std::map<SectionKind, Section> sections;  // always exactly the three kinds
    std::vector<ProvenanceEntry> provenance;
    uint64_t version = 0;

    const Section& section(SectionKind kind) const { return sections.at(kind); }
};

/// Version-0 sketch with all three sections present and empty.
/// An empty id auto-generates a unique one; pass an explicit id for
/// reproducible pipelines.
LanguageSketch new_sketch(uint64_t seed, const std::string& constraint,
                          std::string id = "");

/// New snapshot with `blocks` appended to section `kind` and `prov` logged.
LanguageSketch append(const LanguageSketch& sketch, SectionKind kind,
                      const std::vector<TextBlock>& blocks,
                      const ProvenanceEntry& prov);

/// Deterministic plain-text rendering, fixed section order
/// phonology, grammar, lexicon. Byte-identical for structurally equal sketches.
std::string render(const LanguageSketch& sketch);

std::string serialize(const LanguageSketch& sketch);
LanguageSketch deserialize(const std::string& json_text);

/// Splits body text into sentences: a sentence ends at '.', '!' or '?'
/// followed by whitespace or end of text; a trailing fragment without a
/// terminator counts if non-empty.
std::vector<std::string> split_sentences(const std::string& text);

/// Uniform sample (without replacement) of up to `per_section` non-empty
/// sentences from each section's body blocks. Header blocks never contribute.
/// Deterministic given rng_seed.
std::vector<std::pair<SectionKind, std::string>> sample_sentences(
    const LanguageSketch& sketch, int per_section, uint64_t rng_seed);

bool structurally_equal_ignoring_id(const LanguageSketch& a,
                                    const LanguageSketch& b);

}  // namespace conlang
