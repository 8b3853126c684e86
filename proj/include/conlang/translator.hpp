#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "conlang/gateway.hpp"
#include "conlang/refine.hpp"
#include "conlang/sketch.hpp"
#include "conlang/translator_types.hpp"

namespace conlang {

struct IncompleteSketch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TranslateConfig {
    std::string model_id;  // empty -> gateway default
    RefineConfig refine;
    std::function<std::string()> clock;
};

/// `NEW_LEXEMES` wire format: one `form | gloss | pos | notes` line per entry
/// (notes optional). `NEW_RULES`: one `title | description` line per rule.
std::vector<LexemeEntry> parse_lexeme_lines(const std::string& text);
std::vector<GrammarRule> parse_rule_lines(const std::string& text);

std::string lexicon_block_text(const LexemeEntry& lexeme);
std::string rule_block_text(const GrammarRule& rule);

/// Constructive translation of one source sentence. With update_sketch the
/// emitted lexemes/rules are appended to the sketch (deduped); otherwise the
/// input sketch is returned unchanged.
std::pair<TranslationRecord, LanguageSketch> translate(Gateway& gateway,
                                                       const LanguageSketch& sketch,
                                                       const std::string& source,
                                                       bool update_sketch,
                                                       const TranslateConfig& cfg);

/// Whitespace-delimited unit counts; hyphen/equals morpheme boundaries do not
/// split units (Leipzig-style).
GlossAlignmentReport validate_gloss_alignment(const TranslationRecord& record);

struct SuiteResult {
    std::vector<TranslationRecord> records;
    std::vector<std::string> errors;  // "<source>: <error>" per failed sentence
    LanguageSketch sketch;            // final sketch (threaded in corpus mode)
};

/// independent=true: evaluation mode, every sentence against the same sketch,
/// no updates. independent=false: corpus mode, sequential with sketch threading.
SuiteResult translate_suite(Gateway& gateway, const LanguageSketch& sketch,
                            const std::vector<std::string>& sentences,
                            bool independent, const TranslateConfig& cfg);

std::string serialize_records(const std::vector<TranslationRecord>& records);
std::vector<TranslationRecord> deserialize_records(const std::string& jsonl);

}  // namespace conlang
