#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conlang/gateway.hpp"
#include "conlang/refine.hpp"
#include "conlang/rng.hpp"
#include "conlang/sketch.hpp"
#include "conlang/translator_types.hpp"

namespace conlang {

struct Feature {
    std::string name;
    std::vector<std::string> options;  // exactly 5
};

struct TypologicalChecklist {
    SectionKind stage;
    std::vector<Feature> features;  // exactly 10
};

struct ChecklistSelection {
    std::array<int, 10> choices;  // each in [1,5]
};

struct ChecklistShapeError : FieldError {
    using FieldError::FieldError;
};
struct StageOrderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sentinel bound into prompts when the user gave no constraint.
inline constexpr const char* kNoConstraintSentinel = "(no user constraint)";

struct BootstrapConfig {
    std::string model_id;  // empty -> gateway default
    RefineConfig refine;
    int lexicon_size = 50;
    /// Timestamp source for provenance; replaceable for deterministic runs.
    std::function<std::string()> clock;
};

std::string default_timestamp();

/// Renders a checklist as one line per feature:
/// `name | option1 | option2 | option3 | option4 | option5`.
std::string format_checklist(const TypologicalChecklist& checklist);
TypologicalChecklist parse_checklist(SectionKind stage, const std::string& text);

/// The option texts picked by `selection`, one `name: option` line per feature.
std::string format_selection(const TypologicalChecklist& checklist,
                             const ChecklistSelection& selection);

/// Asks the model for a 10-feature, 5-option checklist for the given stage
/// (phonology or grammar only).
TypologicalChecklist generate_checklist(Gateway& gateway,
                                        const LanguageSketch& sketch,
                                        SectionKind stage,
                                        const BootstrapConfig& cfg);

/// 10 uniform draws from {1..5}.
ChecklistSelection draw_selection(SeededRng& rng);

/// Splits model output into header/body blocks. Heading lines start with '#'
/// or are numbered-outline lines like "1.2 Nouns" (at least two numeric
/// components, so plain sentences starting with a numeral stay body text).
std::vector<TextBlock> segment_blocks(const std::string& text);

/// Runs one bootstrap stage: checklist-conditioned generation (phonology and
/// grammar) or plain generation (lexicon), refined, segmented and appended.
LanguageSketch run_stage(Gateway& gateway, const LanguageSketch& sketch,
                         SectionKind stage,
                         const std::optional<ChecklistSelection>& selection,
                         const BootstrapConfig& cfg);

/// Thrown when a stage fails mid-bootstrap; carries the partial sketch so
/// callers can persist it for post-mortem.
struct StageFailure : std::runtime_error {
    LanguageSketch partial;
    std::string stage;
    StageFailure(std::string msg, LanguageSketch sketch, std::string stage_name)
        : std::runtime_error(std::move(msg)),
          partial(std::move(sketch)),
          stage(std::move(stage_name)) {}
};

/// Full Stage-A bootstrap: phonology and grammar with RNG-selected checklist
/// options, then lexicon. Fully deterministic for fixed (seed, fixtures).
LanguageSketch bootstrap(Gateway& gateway, uint64_t seed,
                         const std::string& constraint,
                         const BootstrapConfig& cfg, std::string sketch_id = "");

/// Single-prompt baseline: one structured request for a whole sketch plus
/// translations of the given sentences. No RNG injection, no refinement.
std::pair<LanguageSketch, std::vector<TranslationRecord>> generate_baseline(
    Gateway& gateway, const std::string& constraint,
    const std::vector<std::string>& sentences, const BootstrapConfig& cfg,
    uint64_t seed = 0, std::string sketch_id = "");

}  // namespace conlang
