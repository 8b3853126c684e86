#include "conlang/sketch.hpp"

#include <atomic>
#include <chrono>

#include "conlang/rng.hpp"
#include "conlang/util.hpp"
#include "json.hpp"

namespace conlang {

namespace {

constexpr SectionKind kSectionOrder[] = {SectionKind::phonology,
                                         SectionKind::grammar,
                                         SectionKind::lexicon};

nlohmann::json block_to_json(const TextBlock& b) {
    return {{"kind", b.kind == BlockKind::header ? "header" : "body"},
            {"text", b.text}};
}

TextBlock block_from_json(const nlohmann::json& j) {
    TextBlock b;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "header") {
        b.kind = BlockKind::header;
    } else if (kind == "body") {
        b.kind = BlockKind::body;
    } else {
        throw SketchError("unknown block kind: " + kind);
    }
    b.text = j.at("text").get<std::string>();
    if (b.text.empty()) throw SketchError("block field 'text' must be non-empty");
    return b;
}

}  // namespace

const char* to_string(SectionKind kind) {
    switch (kind) {
        case SectionKind::phonology: return "phonology";
        case SectionKind::grammar: return "grammar";
        case SectionKind::lexicon: return "lexicon";
    }
    return "?";
}

SectionKind section_kind_from_string(const std::string& name) {
    if (name == "phonology") return SectionKind::phonology;
    if (name == "grammar") return SectionKind::grammar;
    if (name == "lexicon") return SectionKind::lexicon;
    throw SketchError("unknown section kind: " + name);
}

LanguageSketch new_sketch(uint64_t seed, const std::string& constraint,
                          std::string id) {
    if (id.empty()) {
        static std::atomic<uint64_t> counter{0};
        uint64_t now = static_cast<uint64_t>(
            std::chrono::steady_clock::now().time_since_epoch().count());
        uint64_t state = now ^ (counter.fetch_add(1) << 32);
        id = "sk-" + to_hex_u64(splitmix64(state));
    }
    LanguageSketch s;
    s.id = std::move(id);
    s.seed = seed;
    s.user_constraint = constraint;
    for (SectionKind kind : kSectionOrder) s.sections[kind] = Section{kind, {}};
    return s;
}

LanguageSketch append(const LanguageSketch& sketch, SectionKind kind,
                      const std::vector<TextBlock>& blocks,
                      const ProvenanceEntry& prov) {
    if (blocks.empty()) throw EmptyAppend();
    for (const TextBlock& b : blocks) {
        if (b.text.empty()) throw SketchError("cannot append an empty block");
    }
    LanguageSketch next = sketch;
    auto& target = next.sections.at(kind).blocks;
    target.insert(target.end(), blocks.begin(), blocks.end());
    next.provenance.push_back(prov);
    next.version = sketch.version + 1;
    return next;
}

std::string render(const LanguageSketch& sketch) {
    std::string out;
    for (SectionKind kind : kSectionOrder) {
        out += "== ";
        std::string name = to_string(kind);
        for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        out += name;
        out += " ==\n";
        for (const TextBlock& b : sketch.section(kind).blocks) {
            out += b.text;
            out += "\n";
        }
    }
    return out;
}

std::string serialize(const LanguageSketch& sketch) {
    nlohmann::json j;
    j["id"] = sketch.id;
    j["seed"] = sketch.seed;
    j["user_constraint"] = sketch.user_constraint;
    j["version"] = sketch.version;
    nlohmann::json sections = nlohmann::json::array();
    for (SectionKind kind : kSectionOrder) {
        nlohmann::json sec;
        sec["kind"] = to_string(kind);
        nlohmann::json blocks = nlohmann::json::array();
        for (const TextBlock& b : sketch.section(kind).blocks)
            blocks.push_back(block_to_json(b));
        sec["blocks"] = std::move(blocks);
        sections.push_back(std::move(sec));
    }
    j["sections"] = std::move(sections);
    nlohmann::json prov = nlohmann::json::array();
    for (const ProvenanceEntry& p : sketch.provenance) {
        prov.push_back({{"stage", p.stage},
                        {"timestamp", p.timestamp},
                        {"model_id", p.model_id},
                        {"summary", p.summary}});
    }
    j["provenance"] = std::move(prov);
    return j.dump(2) + "\n";
}

LanguageSketch deserialize(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw SketchError(std::string("sketch parse error: ") + e.what());
    }
    try {
        LanguageSketch s;
        s.id = j.at("id").get<std::string>();
        s.seed = j.at("seed").get<uint64_t>();
        s.user_constraint = j.at("user_constraint").get<std::string>();
        s.version = j.at("version").get<uint64_t>();
        for (SectionKind kind : kSectionOrder) s.sections[kind] = Section{kind, {}};
        for (const auto& sec : j.at("sections")) {
            SectionKind kind =
                section_kind_from_string(sec.at("kind").get<std::string>());
            auto& blocks = s.sections.at(kind).blocks;
            for (const auto& b : sec.at("blocks")) blocks.push_back(block_from_json(b));
        }
        for (const auto& p : j.at("provenance")) {
            s.provenance.push_back(ProvenanceEntry{
                p.at("stage").get<std::string>(),
                p.at("timestamp").get<std::string>(),
                p.at("model_id").get<std::string>(),
                p.at("summary").get<std::string>()});
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw SketchError(std::string("sketch field error: ") + e.what());
    }
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            bool at_end = (i + 1 == text.size());
            bool ws_next =
                !at_end && std::isspace(static_cast<unsigned char>(text[i + 1]));
            if (at_end || ws_next) {
                std::string sentence = trim(text.substr(start, i + 1 - start));
                if (!sentence.empty()) out.push_back(std::move(sentence));
                start = i + 1;
            }
        }
    }
    std::string tail = trim(text.substr(start));
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
}

std::vector<std::pair<SectionKind, std::string>> sample_sentences(
    const LanguageSketch& sketch, int per_section, uint64_t rng_seed) {
    if (per_section < 1) throw SketchError("per_section must be >= 1");
    std::vector<std::pair<SectionKind, std::string>> out;
    for (SectionKind kind : kSectionOrder) {
        std::vector<std::string> eligible;
        for (const TextBlock& b : sketch.section(kind).blocks) {
            if (b.kind == BlockKind::header) continue;
            for (std::string& s : split_sentences(b.text))
                eligible.push_back(std::move(s));
        }
        SeededRng rng(rng_seed, std::string("sample:") + to_string(kind));
        int take = std::min<int>(per_section, static_cast<int>(eligible.size()));
        // partial Fisher-Yates
        for (int i = 0; i < take; ++i) {
            int j = rng.uniform_int(i, static_cast<int>(eligible.size()) - 1);
            std::swap(eligible[i], eligible[j]);
            out.emplace_back(kind, eligible[i]);
        }
    }
    return out;
}

bool structurally_equal_ignoring_id(const LanguageSketch& a,
                                    const LanguageSketch& b) {
    LanguageSketch a2 = a;
    LanguageSketch b2 = b;
    a2.id = b2.id = "";
    return serialize(a2) == serialize(b2);
}

}  // namespace conlang
