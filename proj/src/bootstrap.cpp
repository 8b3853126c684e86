#include "conlang/bootstrap.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "conlang/util.hpp"

namespace conlang {

namespace {

std::string section_upper(SectionKind kind) {
    std::string s = to_string(kind);
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::string constraint_slot(const std::string& constraint) {
    return constraint.empty() ? kNoConstraintSentinel : constraint;
}

std::string clock_or_now(const BootstrapConfig& cfg) {
    return cfg.clock ? cfg.clock() : default_timestamp();
}

bool is_heading_line(const std::string& line) {
    std::string t = trim(line);
    if (t.empty()) return false;
    if (t[0] == '#') return true;
    // numbered outline: at least "N.M" followed by whitespace and text
    size_t i = 0;
    int numeric_groups = 0;
    while (i < t.size()) {
        size_t start = i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        if (i == start) return false;
        ++numeric_groups;
        if (i < t.size() && t[i] == '.') {
            ++i;
            if (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) continue;
            // trailing dot after the last group ("1.2. Nouns")
        }
        break;
    }
    if (numeric_groups < 2) return false;
    if (i >= t.size() || !std::isspace(static_cast<unsigned char>(t[i]))) return false;
    return !trim(t.substr(i)).empty();
}

}  // namespace

std::string default_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_checklist(const TypologicalChecklist& checklist) {
    std::string out;
    for (const Feature& f : checklist.features) {
        out += f.name;
        for (const std::string& opt : f.options) out += " | " + opt;
        out += "\n";
    }
    return out;
}

TypologicalChecklist parse_checklist(SectionKind stage, const std::string& text) {
    TypologicalChecklist checklist;
    checklist.stage = stage;
    for (const std::string& line : split_lines(text)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        Feature feature;
        size_t pos = 0;
        std::vector<std::string> parts;
        while (true) {
            size_t bar = t.find('|', pos);
            if (bar == std::string::npos) {
                parts.push_back(trim(t.substr(pos)));
                break;
            }
            parts.push_back(trim(t.substr(pos, bar - pos)));
            pos = bar + 1;
        }
        if (parts.size() != 6)
            throw ChecklistShapeError("checklist line needs a name and 5 options, got " +
                                      std::to_string(parts.size() - 1) + " options: " + t);
        feature.name = parts[0];
        for (size_t i = 1; i < parts.size(); ++i) {
            if (parts[i].empty())
                throw ChecklistShapeError("empty option text in feature " + feature.name);
            feature.options.push_back(parts[i]);
        }
        if (feature.name.empty())
            throw ChecklistShapeError("empty feature name in checklist");
        checklist.features.push_back(std::move(feature));
    }
    if (checklist.features.size() != 10)
        throw ChecklistShapeError("checklist must have exactly 10 features, got " +
                                  std::to_string(checklist.features.size()));
    return checklist;
}

std::string format_selection(const TypologicalChecklist& checklist,
                             const ChecklistSelection& selection) {
    std::string out;
    for (size_t i = 0; i < checklist.features.size(); ++i) {
        const Feature& f = checklist.features[i];
        out += f.name + ": " + f.options[static_cast<size_t>(selection.choices[i] - 1)] + "\n";
    }
    return out;
}

TypologicalChecklist generate_checklist(Gateway& gateway,
                                        const LanguageSketch& sketch,
                                        SectionKind stage,
                                        const BootstrapConfig& cfg) {
    if (stage == SectionKind::lexicon)
        throw StageOrderError("checklists apply only to phonology and grammar");
    PromptRequest req;
    req.template_id = std::string("checklist_") + to_string(stage);
    req.slots = {{"SKETCH", render(sketch)},
                 {"USER_CONSTRAINT", constraint_slot(sketch.user_constraint)}};
    req.model_id = cfg.model_id;

    TypologicalChecklist checklist;
    StructuredResponse resp = gateway.complete_structured(
        req, FieldSchema{{"CHECKLIST"}, {}}, -1,
        [&](const StructuredResponse& r) {
            checklist = parse_checklist(stage, r.at("CHECKLIST"));
        });
    (void)resp;
    return checklist;
}

ChecklistSelection draw_selection(SeededRng& rng) {
    ChecklistSelection sel{};
    for (int& choice : sel.choices) choice = rng.uniform_int(1, 5);
    return sel;
}

std::vector<TextBlock> segment_blocks(const std::string& text) {
    std::vector<TextBlock> blocks;
    std::vector<std::string> paragraph;
    auto flush = [&] {
        if (paragraph.empty()) return;
        std::string joined;
        for (size_t i = 0; i < paragraph.size(); ++i) {
            if (i) joined += '\n';
            joined += paragraph[i];
        }
        blocks.push_back({BlockKind::body, std::move(joined)});
        paragraph.clear();
    };
    for (const std::string& line : split_lines(text)) {
        if (trim(line).empty()) {
            flush();
            continue;
        }
        if (is_heading_line(line)) {
            flush();
            blocks.push_back({BlockKind::header, trim(line)});
            continue;
        }
        paragraph.push_back(trim(line));
    }
    flush();
    return blocks;
}

LanguageSketch run_stage(Gateway& gateway, const LanguageSketch& sketch,
                         SectionKind stage,
                         const std::optional<ChecklistSelection>& selection,
                         const BootstrapConfig& cfg) {
    // linear stage order: phonology, grammar, lexicon
    if (stage == SectionKind::grammar &&
        sketch.section(SectionKind::phonology).blocks.empty())
        throw StageOrderError("grammar stage requires a non-empty phonology section");
    if (stage == SectionKind::lexicon &&
        (sketch.section(SectionKind::phonology).blocks.empty() ||
         sketch.section(SectionKind::grammar).blocks.empty()))
        throw StageOrderError("lexicon stage requires phonology and grammar");
    const bool wants_checklist = stage != SectionKind::lexicon;
    if (wants_checklist != selection.has_value())
        throw StageOrderError(
            "checklist selection must be present exactly for phonology/grammar");

    PromptRequest req;
    req.template_id = std::string("stage_") + to_string(stage);
    req.model_id = cfg.model_id;
    req.slots = {{"SKETCH", render(sketch)},
                 {"USER_CONSTRAINT", constraint_slot(sketch.user_constraint)}};
    if (wants_checklist) {
        TypologicalChecklist checklist = generate_checklist(gateway, sketch, stage, cfg);
        req.slots["CHECKLIST"] = format_checklist(checklist);
        req.slots["SELECTION"] = format_selection(checklist, *selection);
    } else {
        req.slots["LEXICON_SIZE"] = std::to_string(cfg.lexicon_size);
    }

    StructuredResponse resp =
        gateway.complete_structured(req, FieldSchema{{"CONTENT"}, {}});
    auto [refined, trace] =
        refine_loop(gateway, render(sketch), resp.at("CONTENT"), cfg.refine);

    std::vector<TextBlock> blocks = segment_blocks(refined);
    if (blocks.empty())
        throw GatewayError(std::string("stage ") + to_string(stage) +
                           " produced no usable content");
    ProvenanceEntry prov;
    prov.stage = std::string("bootstrap:") + to_string(stage);
    prov.timestamp = clock_or_now(cfg);
    prov.model_id = gateway.resolve_model(cfg.model_id);
    prov.summary = "appended " + std::to_string(blocks.size()) +
                   " blocks; refine final score " + std::to_string(trace.final_score) +
                   " after " + std::to_string(trace.iterations.size()) +
                   " critique(s), stop=" + to_string(trace.terminated_by);
    return append(sketch, stage, blocks, prov);
}

LanguageSketch bootstrap(Gateway& gateway, uint64_t seed,
                         const std::string& constraint,
                         const BootstrapConfig& cfg, std::string sketch_id) {
    LanguageSketch sketch = new_sketch(seed, constraint, std::move(sketch_id));
    const SectionKind stages[] = {SectionKind::phonology, SectionKind::grammar,
                                  SectionKind::lexicon};
    for (SectionKind stage : stages) {
        std::optional<ChecklistSelection> selection;
        if (stage != SectionKind::lexicon) {
            SeededRng rng(seed, to_string(stage));
            selection = draw_selection(rng);
        }
        try {
            sketch = run_stage(gateway, sketch, stage, selection, cfg);
        } catch (const std::exception& e) {
            throw StageFailure(std::string("bootstrap failed at ") + to_string(stage) +
                                   ": " + e.what(),
                               sketch, to_string(stage));
        }
    }
    return sketch;
}

std::pair<LanguageSketch, std::vector<TranslationRecord>> generate_baseline(
    Gateway& gateway, const std::string& constraint,
    const std::vector<std::string>& sentences, const BootstrapConfig& cfg,
    uint64_t seed, std::string sketch_id) {
    std::string numbered;
    for (size_t i = 0; i < sentences.size(); ++i)
        numbered += std::to_string(i + 1) + ". " + sentences[i] + "\n";

    PromptRequest req;
    req.template_id = "baseline";
    req.model_id = cfg.model_id;
    req.slots = {{"USER_CONSTRAINT", constraint_slot(constraint)},
                 {"SENTENCES", numbered}};

    std::vector<std::vector<std::string>> parsed_rows;
    StructuredResponse resp = gateway.complete_structured(
        req,
        FieldSchema{{"PHONOLOGY", "GRAMMAR", "LEXICON", "TRANSLATIONS"}, {}}, -1,
        [&](const StructuredResponse& r) {
            parsed_rows.clear();
            for (const std::string& line : split_lines(r.at("TRANSLATIONS"))) {
                std::string t = trim(line);
                if (t.empty()) continue;
                size_t a = t.find("|||");
                if (a == std::string::npos)
                    throw FieldError("TRANSLATIONS line missing '|||': " + t);
                std::string translation = trim(t.substr(0, a));
                std::string gloss = trim(t.substr(a + 3));
                if (translation.empty() || gloss.empty())
                    throw FieldError("empty translation or gloss: " + t);
                parsed_rows.push_back({translation, gloss});
            }
            if (parsed_rows.size() != sentences.size())
                throw FieldError("expected " + std::to_string(sentences.size()) +
                                 " translations, got " +
                                 std::to_string(parsed_rows.size()));
        });

    LanguageSketch sketch = new_sketch(seed, constraint, std::move(sketch_id));
    ProvenanceEntry prov;
    prov.stage = "baseline";
    prov.timestamp = clock_or_now(cfg);
    prov.model_id = gateway.resolve_model(cfg.model_id);
    prov.summary = "single-prompt baseline generation";
    const SectionKind stages[] = {SectionKind::phonology, SectionKind::grammar,
                                  SectionKind::lexicon};
    for (SectionKind stage : stages) {
        std::string field = section_upper(stage);
        std::vector<TextBlock> blocks = segment_blocks(resp.at(field));
        if (blocks.empty()) blocks.push_back({BlockKind::body, "(empty)"});
        // single provenance entry overall: only the first append logs it
        ProvenanceEntry entry =
            stage == SectionKind::phonology
                ? prov
                : ProvenanceEntry{"baseline", prov.timestamp, prov.model_id,
                                  "baseline section: " + std::string(to_string(stage))};
        sketch = append(sketch, stage, blocks, entry);
    }
    // collapse provenance to a single generation entry
    sketch.provenance = {prov};

    std::vector<TranslationRecord> records;
    for (size_t i = 0; i < sentences.size(); ++i) {
        TranslationRecord rec;
        rec.source = sentences[i];
        rec.translation = parsed_rows[i][0];
        rec.gloss = parsed_rows[i][1];
        records.push_back(std::move(rec));
    }
    return {std::move(sketch), std::move(records)};
}

}  // namespace conlang
