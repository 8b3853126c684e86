#include "conlang/canned_backend.hpp"

#include <array>
#include <cctype>
#include <sstream>

#include "conlang/util.hpp"

namespace conlang {

namespace {

const std::array<const char*, 12> kSyllables = {
    "ka", "ti", "mo", "su", "ne", "plo", "ri", "va", "dze", "ku", "sha", "lem"};

std::string slot_or(const RenderedRequest& req, const std::string& name) {
    auto it = req.slots.find(name);
    return it == req.slots.end() ? std::string() : it->second;
}

uint64_t request_hash(const RenderedRequest& req) {
    std::string key = req.template_id;
    for (const auto& [k, v] : req.slots) {
        if (k.rfind("__RETRY", 0) == 0) continue;
        key += '\x1f' + k + '\x1f' + v;
    }
    return fnv1a64(key);
}

std::string pseudo_word(uint64_t h, const std::string& token) {
    uint64_t state = h ^ fnv1a64(token);
    int n = 2 + static_cast<int>(splitmix64(state) % 2);
    std::string word;
    for (int i = 0; i < n; ++i)
        word += kSyllables[splitmix64(state) % kSyllables.size()];
    return word;
}

std::string content_word(const std::string& token) {
    std::string w;
    for (char c : token)
        if (std::isalpha(static_cast<unsigned char>(c)))
            w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return w;
}

std::string fence(const std::string& name, const std::string& content) {
    return "===FIELD " + name + "===\n" + content + "\n===END===\n";
}

std::string checklist_response(const RenderedRequest& req) {
    const bool phon = req.template_id == "checklist_phonology";
    static const char* phonology_lines[] = {
        "Consonant inventory size | very small (8-12) | small (13-18) | average (19-25) | large (26-35) | very large (36+)",
        "Vowel system | three-vowel | five-vowel | seven-vowel with length | vertical | large with nasalization",
        "Syllable structure | strictly CV | CV(N) | CVC | complex onsets | complex onsets and codas",
        "Tone | none | two level tones | three level tones | contour tones | pitch accent",
        "Stress | initial | final | penultimate | weight-sensitive | free",
        "Phonation contrasts | plain only | aspirated stops | ejectives | implosives | breathy voice",
        "Nasal inventory | none | one nasal | two nasals | three nasals | nasal vowels too",
        "Liquid inventory | none | one liquid | l and r | multiple rhotics | laterals and rhotics",
        "Vowel harmony | none | backness | rounding | height | ATR",
        "Consonant clusters | forbidden | word-medial only | onset only | coda only | unrestricted"};
    static const char* grammar_lines[] = {
        "Basic word order | SOV | SVO | VSO | OVS | no dominant order",
        "Morphological type | isolating | agglutinating | fusional | polysynthetic | mixed",
        "Alignment | nominative-accusative | ergative-absolutive | active-stative | tripartite | neutral",
        "Case marking | none | two cases | four cases | seven cases | ten or more cases",
        "Verb agreement | none | subject only | subject and object | polypersonal | gender-based",
        "Tense system | none | past vs nonpast | future vs nonfuture | three-way | remote distinctions",
        "Negation | particle | prefix | suffix | auxiliary | double marking",
        "Question formation | particle | intonation only | inversion | verb morphology | clefting",
        "Noun classes | none | two genders | three genders | animacy-based | ten or more classes",
        "Adposition type | prepositions | postpositions | inpositions | case only | mixed"};
    std::string content;
    for (const char* line : (phon ? phonology_lines : grammar_lines)) {
        content += line;
        content += "\n";
    }
    return fence("CHECKLIST", content);
}

std::string stage_response(const RenderedRequest& req, uint64_t h) {
    std::string content;
    const bool phon = req.template_id == "stage_phonology";
    content += phon ? "# Phoneme inventory and structure\n"
                    : "# Core morphosyntax\n";
    for (const std::string& line : split_lines(slot_or(req, "SELECTION"))) {
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t colon = t.find(':');
        std::string name = colon == std::string::npos ? t : trim(t.substr(0, colon));
        std::string opt = colon == std::string::npos ? t : trim(t.substr(colon + 1));
        content += "For " + name + ", the language uses " + opt + ".\n";
    }
    content += "\n# Examples\n";
    uint64_t state = h;
    for (int i = 0; i < 5; ++i) {
        std::string w = pseudo_word(splitmix64(state), std::to_string(i));
        content += phon ? "The form " + w + " is a well-formed word.\n"
                        : "The form " + w + " illustrates rule " +
                              std::to_string(i + 1) + " in context.\n";
    }
    return fence("CONTENT", content);
}

std::string lexicon_response(const RenderedRequest& req, uint64_t h) {
    static const char* kGlosses[] = {
        "person", "woman",  "man",   "child",  "dog",    "bird",  "cat",   "fish",
        "tree",   "water",  "stone", "mountain", "fire", "sun",   "moon",  "house",
        "garden", "book",   "eye",   "hand",   "foot",   "heart", "to sleep",
        "to see", "to give", "to walk", "to talk", "to eat", "to play", "to wait",
        "big",    "small",  "red",   "black",  "hungry", "sweet", "good",  "new",
        "one",    "two",    "three", "I",      "you",    "this",  "that",  "where",
        "yesterday", "not", "in",    "my"};
    int size = 50;
    try {
        size = std::stoi(slot_or(req, "LEXICON_SIZE"));
    } catch (const std::exception&) {
    }
    std::string content = "# Seed lexicon\n";
    int count = std::min<int>(size, static_cast<int>(std::size(kGlosses)));
    for (int i = 0; i < count; ++i) {
        std::string gloss = kGlosses[i];
        std::string pos = gloss.rfind("to ", 0) == 0 ? "verb" : "noun";
        content += "form: " + pseudo_word(h, gloss) + " | gloss: " + gloss +
                   " | pos: " + pos + "\n";
    }
    return fence("CONTENT", content);
}

std::string critic_response(const RenderedRequest& req) {
    std::string candidate = slot_or(req, "CANDIDATE");
    const bool already_clarified = candidate.find("Clarified:") != std::string::npos;
    if (!already_clarified && fnv1a64(candidate) % 4 == 0) {
        return fence("SCORE", "8") +
               fence("ISSUES",
                     "overall | One statement could be read as contradicting the "
                     "phonology; restate it unambiguously.");
    }
    return fence("SCORE", "9") + fence("ISSUES", "");
}

std::string editor_response(const RenderedRequest& req) {
    return fence("REVISED", slot_or(req, "CANDIDATE") +
                                "\nClarified: restated to match the phonology exactly.");
}

std::string translate_response(const RenderedRequest& req, uint64_t h) {
    std::string source = slot_or(req, "SOURCE_TEXT");
    std::istringstream in(source);
    std::string token;
    std::string translation;
    std::string gloss;
    std::string first_content;
    while (in >> token) {
        std::string word = content_word(token);
        if (word.empty()) continue;
        if (first_content.empty() && word.size() > 3) first_content = word;
        if (!translation.empty()) {
            translation += " ";
            gloss += " ";
        }
        translation += pseudo_word(h, word);
        std::string g = word;
        for (char& c : g) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        gloss += g;
    }
    std::string out = fence("TRANSLATION", translation) + fence("GLOSS", gloss);
    uint64_t sh = fnv1a64(source);
    if (sh % 3 == 0 && !first_content.empty()) {
        out += fence("NEW_LEXEMES", pseudo_word(h ^ 1, first_content) + " | " +
                                        first_content + " | noun | coined in translation");
    }
    if (sh % 5 == 0) {
        out += fence("NEW_RULES",
                     "Focus fronting | A focused constituent may move to "
                     "clause-initial position, marked by the particle ke.");
    }
    return out;
}

std::string baseline_response(const RenderedRequest& req, uint64_t h) {
    std::string phonology =
        "# Phonology\nThe language has a five-vowel system and CV syllables.\n"
        "Stress falls on the first syllable of every word.\n"
        "There are twelve consonants and no tone.\n"
        "Long vowels are absent.\nClusters are forbidden.\n";
    std::string grammar =
        "# Grammar\nBasic word order is SVO.\nNouns take a plural suffix -ne.\n"
        "Verbs agree with the subject in person.\nNegation uses the particle ba.\n"
        "Questions are marked by the final particle ko.\n";
    std::string lexicon = "# Lexicon\n";
    for (const char* g : {"dog", "water", "book", "child", "mountain"})
        lexicon += "form: " + pseudo_word(h, g) + " | gloss: " + std::string(g) +
                   " | pos: noun\n";
    std::string translations;
    for (const std::string& line : split_lines(slot_or(req, "SENTENCES"))) {
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t dot = t.find(". ");
        std::string sentence = dot == std::string::npos ? t : t.substr(dot + 2);
        std::istringstream in(sentence);
        std::string token;
        std::string tr;
        std::string gl;
        while (in >> token) {
            std::string word = content_word(token);
            if (word.empty()) continue;
            if (!tr.empty()) {
                tr += " ";
                gl += " ";
            }
            tr += pseudo_word(h, word);
            std::string g = word;
            for (char& c : g)
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            gl += g;
        }
        translations += tr + " ||| " + gl + "\n";
    }
    return fence("PHONOLOGY", phonology) + fence("GRAMMAR", grammar) +
           fence("LEXICON", lexicon) + fence("TRANSLATIONS", translations);
}

std::string wals_response(const RenderedRequest& req, uint64_t h) {
    std::vector<std::string> values;
    for (const std::string& line : split_lines(slot_or(req, "ALLOWED_VALUES"))) {
        std::string t = trim(line);
        if (t.rfind("- ", 0) != 0) continue;
        t = trim(t.substr(2));
        size_t paren = t.find(" (when");
        if (paren != std::string::npos) t = trim(t.substr(0, paren));
        values.push_back(t);
    }
    if (values.empty()) return fence("VALUE", "unspecified");
    return fence("VALUE", values[h % values.size()]);
}

std::string judge_response(const RenderedRequest& req, uint64_t h, int every) {
    bool ok = (h % static_cast<uint64_t>(every)) != 0;
    return fence("VERDICT", ok ? "consistent" : "inconsistent") +
           fence("RATIONALE", ok ? "The item follows the rules stated in the sketch."
                                 : "The item conflicts with a rule stated elsewhere "
                                   "in the sketch.");
    (void)req;
}

}  // namespace

std::string CannedBackend::complete(const RenderedRequest& request) {
    const uint64_t h = request_hash(request);
    const std::string& id = request.template_id;
    if (id == "checklist_phonology" || id == "checklist_grammar")
        return checklist_response(request);
    if (id == "stage_phonology" || id == "stage_grammar")
        return stage_response(request, h);
    if (id == "stage_lexicon") return lexicon_response(request, h);
    if (id == "critic") return critic_response(request);
    if (id == "editor") return editor_response(request);
    if (id == "translate") return translate_response(request, h);
    if (id == "baseline") return baseline_response(request, h);
    if (id == "wals_feature") return wals_response(request, h);
    if (id == "judge_sentence") return judge_response(request, h, 8);
    if (id == "judge_translation") return judge_response(request, h, 4);
    throw ProviderError("canned backend: unknown template " + id);
}

}  // namespace conlang
