#pragma once

#include <string>
#include <vector>

#include "conlang/refine.hpp"

namespace conlang {

struct LexemeEntry {
    std::string form;
    std::string gloss;
    std::string part_of_speech;
    std::string notes;  // optional
};

struct GrammarRule {
    std::string title;
    std::string description;
};

struct TranslationRecord {
    std::string source;
    std::string translation;
    std::string gloss;
    std::vector<LexemeEntry> new_lexemes;
    std::vector<GrammarRule> new_rules;
    RefineTrace refine_trace;
};

struct GlossAlignmentReport {
    int word_count = 0;
    int gloss_group_count = 0;
    bool aligned = false;
};

}  // namespace conlang
