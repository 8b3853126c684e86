#pragma once

#include <memory>
#include <string>

#include "conlang/gateway.hpp"
#include "conlang/sketch.hpp"

namespace conlang::test {

inline std::string repo_root() { return CONLANG_REPO_ROOT; }

inline PromptLibrary real_prompts() {
    return PromptLibrary(repo_root() + "/prompts");
}

inline Gateway scripted_gateway(std::shared_ptr<ScriptedBackend> backend,
                                const std::string& default_model = "test-model") {
    GatewayConfig config;
    config.mode = GatewayMode::live;
    config.default_model_id = default_model;
    return Gateway(config, std::move(backend), real_prompts());
}

inline std::string fence(const std::string& name, const std::string& content) {
    return "===FIELD " + name + "===\n" + content + "\n===END===\n";
}

// A complete sketch with a few body sentences per section.
inline LanguageSketch small_sketch(uint64_t seed = 7, const std::string& id = "t1") {
    LanguageSketch s = new_sketch(seed, "", id);
    s = append(s, SectionKind::phonology,
               {{BlockKind::header, "# Phonology"},
                {BlockKind::body,
                 "The language has five vowels. Syllables are CV. Stress is initial."}},
               {"test", "t", "m", "phonology"});
    s = append(s, SectionKind::grammar,
               {{BlockKind::header, "# Grammar"},
                {BlockKind::body,
                 "Word order is SOV. Nouns take case suffixes. Verbs agree with "
                 "subjects."}},
               {"test", "t", "m", "grammar"});
    s = append(s, SectionKind::lexicon,
               {{BlockKind::header, "# Lexicon"},
                {BlockKind::body, "form: kava | gloss: dog | pos: noun"},
                {BlockKind::body, "form: timo | gloss: water | pos: noun"}},
               {"test", "t", "m", "lexicon"});
    return s;
}

}  // namespace conlang::test
