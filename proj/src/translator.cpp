#include "conlang/translator.hpp"

#include <sstream>

#include "conlang/bootstrap.hpp"
#include "conlang/util.hpp"
#include "json.hpp"

namespace conlang {

namespace {

std::vector<std::string> split_bar(const std::string& line) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
        size_t bar = line.find('|', pos);
        if (bar == std::string::npos) {
            parts.push_back(trim(line.substr(pos)));
            break;
        }
        parts.push_back(trim(line.substr(pos, bar - pos)));
        pos = bar + 1;
    }
    return parts;
}

int count_units(const std::string& text) {
    std::istringstream in(text);
    std::string unit;
    int n = 0;
    while (in >> unit) ++n;
    return n;
}

std::string clock_or_now(const TranslateConfig& cfg) {
    return cfg.clock ? cfg.clock() : default_timestamp();
}

std::map<std::string, std::string> record_to_fields(const TranslationRecord& rec) {
    std::map<std::string, std::string> fields;
    fields["TRANSLATION"] = rec.translation;
    fields["GLOSS"] = rec.gloss;
    if (!rec.new_lexemes.empty()) {
        std::string lines;
        for (const LexemeEntry& l : rec.new_lexemes) {
            lines += l.form + " | " + l.gloss + " | " + l.part_of_speech;
            if (!l.notes.empty()) lines += " | " + l.notes;
            lines += "\n";
        }
        fields["NEW_LEXEMES"] = lines;
    }
    if (!rec.new_rules.empty()) {
        std::string lines;
        for (const GrammarRule& r : rec.new_rules)
            lines += r.title + " | " + r.description + "\n";
        fields["NEW_RULES"] = lines;
    }
    return fields;
}

TranslationRecord record_from_response(const std::string& source,
                                       const StructuredResponse& resp) {
    TranslationRecord rec;
    rec.source = source;
    rec.translation = trim(resp.at("TRANSLATION"));
    rec.gloss = trim(resp.at("GLOSS"));
    rec.new_lexemes = parse_lexeme_lines(resp.get_or("NEW_LEXEMES"));
    rec.new_rules = parse_rule_lines(resp.get_or("NEW_RULES"));
    return rec;
}

// Lexicon entries appended by constructive translation carry this shape so
// duplicates can be recognized later.
bool parse_lexicon_block(const std::string& text, LexemeEntry& out) {
    if (text.rfind("form:", 0) != 0) return false;
    std::vector<std::string> parts = split_bar(text);
    LexemeEntry entry;
    for (const std::string& part : parts) {
        size_t colon = part.find(':');
        if (colon == std::string::npos) return false;
        std::string key = trim(part.substr(0, colon));
        std::string value = trim(part.substr(colon + 1));
        if (key == "form") entry.form = value;
        else if (key == "gloss") entry.gloss = value;
        else if (key == "pos") entry.part_of_speech = value;
        else if (key == "notes") entry.notes = value;
    }
    if (entry.form.empty() || entry.gloss.empty()) return false;
    out = entry;
    return true;
}

}  // namespace

std::vector<LexemeEntry> parse_lexeme_lines(const std::string& text) {
    std::vector<LexemeEntry> out;
    for (const std::string& line : split_lines(text)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<std::string> parts = split_bar(t);
        if (parts.size() < 2)
            throw FieldError("NEW_LEXEMES line needs at least 'form | gloss': " + t);
        LexemeEntry entry;
        entry.form = parts[0];
        entry.gloss = parts[1];
        if (parts.size() > 2) entry.part_of_speech = parts[2];
        if (parts.size() > 3) entry.notes = parts[3];
        if (entry.form.empty() || entry.gloss.empty())
            throw FieldError("NEW_LEXEMES entry with empty form or gloss: " + t);
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<GrammarRule> parse_rule_lines(const std::string& text) {
    std::vector<GrammarRule> out;
    for (const std::string& line : split_lines(text)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<std::string> parts = split_bar(t);
        if (parts.size() < 2 || parts[0].empty() || parts[1].empty())
            throw FieldError("NEW_RULES line needs 'title | description': " + t);
        out.push_back({parts[0], parts[1]});
    }
    return out;
}

std::string lexicon_block_text(const LexemeEntry& lexeme) {
    std::string text = "form: " + lexeme.form + " | gloss: " + lexeme.gloss;
    text += " | pos: " + (lexeme.part_of_speech.empty() ? std::string("unspecified")
                                                        : lexeme.part_of_speech);
    if (!lexeme.notes.empty()) text += " | notes: " + lexeme.notes;
    return text;
}

std::string rule_block_text(const GrammarRule& rule) {
    return rule.title + ": " + rule.description;
}

GlossAlignmentReport validate_gloss_alignment(const TranslationRecord& record) {
    GlossAlignmentReport report;
    report.word_count = count_units(record.translation);
    report.gloss_group_count = count_units(record.gloss);
    report.aligned = report.word_count == report.gloss_group_count &&
                     report.word_count > 0;
    return report;
}

std::pair<TranslationRecord, LanguageSketch> translate(Gateway& gateway,
                                                       const LanguageSketch& sketch,
                                                       const std::string& source,
                                                       bool update_sketch,
                                                       const TranslateConfig& cfg) {
    for (SectionKind kind :
         {SectionKind::phonology, SectionKind::grammar, SectionKind::lexicon}) {
        if (sketch.section(kind).blocks.empty())
            throw IncompleteSketch(std::string("section '") + to_string(kind) +
                                   "' is empty; bootstrap the sketch first");
    }

    PromptRequest req;
    req.template_id = "translate";
    req.model_id = cfg.model_id;
    req.slots = {{"SKETCH", render(sketch)}, {"SOURCE_TEXT", source}};
    const FieldSchema schema{{"TRANSLATION", "GLOSS"}, {"NEW_LEXEMES", "NEW_RULES"}};
    StructuredResponse resp = gateway.complete_structured(req, schema);
    TranslationRecord record = record_from_response(source, resp);

    // refine the full serialized record; a gloss misalignment is surfaced to
    // the critic as part of its context
    std::string context = "Source sentence: " + source + "\n\n" + render(sketch);
    GlossAlignmentReport alignment = validate_gloss_alignment(record);
    if (!alignment.aligned) {
        context += "\nWarning: translation has " +
                   std::to_string(alignment.word_count) + " units but the gloss has " +
                   std::to_string(alignment.gloss_group_count) +
                   "; interlinear glosses should align word-for-word.";
    }
    auto [refined_text, trace] =
        refine_loop(gateway, context, emit_fields(record_to_fields(record)), cfg.refine);
    record.refine_trace = trace;
    try {
        StructuredResponse refined = extract_fields(refined_text, schema);
        record = record_from_response(source, refined);
        record.refine_trace = trace;
    } catch (const FieldError&) {
        // the editor broke the record shape; keep the pre-refine record
        record.refine_trace.error = "refined record unparseable; kept pre-refine record";
    }

    if (!update_sketch) return {std::move(record), sketch};

    LanguageSketch next = sketch;
    std::string timestamp = clock_or_now(cfg);
    std::string model = gateway.resolve_model(cfg.model_id);

    std::vector<TextBlock> lexeme_blocks;
    for (const LexemeEntry& lexeme : record.new_lexemes) {
        bool same_form_and_gloss = false;
        bool same_form_only = false;
        for (const TextBlock& b : next.section(SectionKind::lexicon).blocks) {
            LexemeEntry existing;
            if (!parse_lexicon_block(b.text, existing)) continue;
            if (existing.form == lexeme.form) {
                if (existing.gloss == lexeme.gloss) same_form_and_gloss = true;
                else same_form_only = true;
            }
        }
        if (same_form_and_gloss) continue;  // exact duplicate, dropped
        LexemeEntry to_add = lexeme;
        if (same_form_only) {
            to_add.notes = to_add.notes.empty()
                               ? "homophonous with an existing entry"
                               : to_add.notes + "; homophonous with an existing entry";
        }
        lexeme_blocks.push_back({BlockKind::body, lexicon_block_text(to_add)});
    }
    if (!lexeme_blocks.empty()) {
        next = append(next, SectionKind::lexicon, lexeme_blocks,
                      {"translate:new_lexemes", timestamp, model,
                       "constructive translation of: " + source});
    }
    std::vector<TextBlock> rule_blocks;
    for (const GrammarRule& rule : record.new_rules)
        rule_blocks.push_back({BlockKind::body, rule_block_text(rule)});
    if (!rule_blocks.empty()) {
        next = append(next, SectionKind::grammar, rule_blocks,
                      {"translate:new_rules", timestamp, model,
                       "constructive translation of: " + source});
    }
    return {std::move(record), std::move(next)};
}

SuiteResult translate_suite(Gateway& gateway, const LanguageSketch& sketch,
                            const std::vector<std::string>& sentences,
                            bool independent, const TranslateConfig& cfg) {
    if (sentences.empty())
        throw std::invalid_argument("translate_suite: sentences must be non-empty");
    SuiteResult result;
    result.sketch = sketch;
    for (const std::string& source : sentences) {
        try {
            auto [record, next] = translate(gateway, independent ? sketch : result.sketch,
                                            source, !independent, cfg);
            result.records.push_back(std::move(record));
            if (!independent) result.sketch = std::move(next);
        } catch (const std::exception& e) {
            result.errors.push_back(source + ": " + e.what());
        }
    }
    return result;
}

std::string serialize_records(const std::vector<TranslationRecord>& records) {
    std::string out;
    for (const TranslationRecord& rec : records) {
        nlohmann::json j;
        j["source"] = rec.source;
        j["translation"] = rec.translation;
        j["gloss"] = rec.gloss;
        nlohmann::json lex = nlohmann::json::array();
        for (const LexemeEntry& l : rec.new_lexemes)
            lex.push_back({{"form", l.form},
                           {"gloss", l.gloss},
                           {"part_of_speech", l.part_of_speech},
                           {"notes", l.notes}});
        j["new_lexemes"] = std::move(lex);
        nlohmann::json rules = nlohmann::json::array();
        for (const GrammarRule& r : rec.new_rules)
            rules.push_back({{"title", r.title}, {"description", r.description}});
        j["new_rules"] = std::move(rules);
        nlohmann::json iters = nlohmann::json::array();
        for (const RefineIteration& it : rec.refine_trace.iterations)
            iters.push_back({{"score", it.score}, {"issue_count", it.issue_count}});
        j["refine_trace"] = {{"iterations", std::move(iters)},
                             {"final_score", rec.refine_trace.final_score},
                             {"terminated_by", to_string(rec.refine_trace.terminated_by)},
                             {"error", rec.refine_trace.error}};
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<TranslationRecord> deserialize_records(const std::string& jsonl) {
    std::vector<TranslationRecord> records;
    for (const std::string& line : split_lines(jsonl)) {
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        TranslationRecord rec;
        rec.source = j.at("source").get<std::string>();
        rec.translation = j.at("translation").get<std::string>();
        rec.gloss = j.at("gloss").get<std::string>();
        for (const auto& l : j.at("new_lexemes"))
            rec.new_lexemes.push_back({l.at("form").get<std::string>(),
                                       l.at("gloss").get<std::string>(),
                                       l.at("part_of_speech").get<std::string>(),
                                       l.at("notes").get<std::string>()});
        for (const auto& r : j.at("new_rules"))
            rec.new_rules.push_back({r.at("title").get<std::string>(),
                                     r.at("description").get<std::string>()});
        const auto& tr = j.at("refine_trace");
        for (const auto& it : tr.at("iterations"))
            rec.refine_trace.iterations.push_back(
                {it.at("score").get<int>(), it.at("issue_count").get<int>()});
        rec.refine_trace.final_score = tr.at("final_score").get<int>();
        std::string stop = tr.at("terminated_by").get<std::string>();
        if (stop == "threshold") rec.refine_trace.terminated_by = RefineStop::threshold;
        else if (stop == "cap") rec.refine_trace.terminated_by = RefineStop::cap;
        else if (stop == "no_issues") rec.refine_trace.terminated_by = RefineStop::no_issues;
        else rec.refine_trace.terminated_by = RefineStop::error;
        rec.refine_trace.error = tr.at("error").get<std::string>();
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace conlang
