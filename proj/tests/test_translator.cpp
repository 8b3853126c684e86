#include "conlang/translator.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace conlang;

namespace {

// translator backend with a quiet critic; emits optional lexemes/rules on cue
std::shared_ptr<ScriptedBackend> translator_backend(
    std::function<std::string(const std::string& source)> extras = nullptr) {
    return std::make_shared<ScriptedBackend>(
        [extras](const RenderedRequest& req) -> std::string {
            if (req.template_id == "critic")
                return test::fence("SCORE", "9") + test::fence("ISSUES", "");
            if (req.template_id == "translate") {
                std::string source = req.slots.at("SOURCE_TEXT");
                std::string out = test::fence("TRANSLATION", "kava timo ne") +
                                  test::fence("GLOSS", "dog water 3SG");
                if (extras) out += extras(source);
                return out;
            }
            throw ProviderError("unexpected " + req.template_id);
        });
}

}  // namespace

TEST_CASE("gloss alignment on interlinear examples") {
    TranslationRecord rec;
    rec.translation = "tsO gO-snat kRa !a.TO";
    rec.gloss = "PRS 3SG.NHUM.S-sleep big dog.NOM";
    GlossAlignmentReport report = validate_gloss_alignment(rec);
    CHECK(report.word_count == 4);
    CHECK(report.gloss_group_count == 4);
    CHECK(report.aligned);

    rec.translation = "a b c";
    rec.gloss = "A B C D";
    CHECK_FALSE(validate_gloss_alignment(rec).aligned);

    rec.gloss = "   ";
    report = validate_gloss_alignment(rec);
    CHECK(report.gloss_group_count == 0);
    CHECK_FALSE(report.aligned);
}

TEST_CASE("translate requires a complete sketch") {
    auto backend = translator_backend();
    Gateway gw = test::scripted_gateway(backend);
    LanguageSketch incomplete = new_sketch(1, "");
    CHECK_THROWS_AS(translate(gw, incomplete, "The dog sleeps.", false, {}),
                    IncompleteSketch);
}

TEST_CASE("translate without update leaves the sketch untouched") {
    auto backend = translator_backend();
    Gateway gw = test::scripted_gateway(backend);
    LanguageSketch sketch = test::small_sketch();
    std::string before = serialize(sketch);
    auto [record, after] = translate(gw, sketch, "The dog drinks water.", false, {});
    CHECK(record.translation == "kava timo ne");
    CHECK(record.gloss == "dog water 3SG");
    CHECK(serialize(after) == before);
}

TEST_CASE("translate with update appends lexemes and rules") {
    auto backend = translator_backend([](const std::string&) {
        return test::fence("NEW_LEXEMES", "plomu | to drink | verb") +
               test::fence("NEW_RULES", "Benefactive | Marked with the suffix -ne.");
    });
    Gateway gw = test::scripted_gateway(backend);
    LanguageSketch sketch = test::small_sketch();
    TranslateConfig cfg;
    cfg.clock = [] { return std::string("t0"); };
    auto [record, after] = translate(gw, sketch, "The dog drinks water.", true, cfg);
    REQUIRE(record.new_lexemes.size() == 1);
    CHECK(record.new_lexemes[0].form == "plomu");
    CHECK(after.version == sketch.version + 2);  // lexeme append + rule append
    std::string lexicon_text = render(after);
    CHECK(lexicon_text.find("plomu") != std::string::npos);
    CHECK(lexicon_text.find("Benefactive") != std::string::npos);
}

TEST_CASE("duplicate lexeme policy") {
    TranslateConfig cfg;
    cfg.clock = [] { return std::string("t0"); };

    SUBCASE("same form and gloss dropped silently") {
        auto backend = translator_backend([](const std::string&) {
            return test::fence("NEW_LEXEMES", "kava | dog | noun");
        });
        Gateway gw = test::scripted_gateway(backend);
        LanguageSketch sketch = test::small_sketch();
        auto [record, after] = translate(gw, sketch, "A dog.", true, cfg);
        CHECK(after.version == sketch.version);  // nothing appended
    }
    SUBCASE("same form, different gloss appended with homophony note") {
        auto backend = translator_backend([](const std::string&) {
            return test::fence("NEW_LEXEMES", "kava | ember | noun");
        });
        Gateway gw = test::scripted_gateway(backend);
        LanguageSketch sketch = test::small_sketch();
        auto [record, after] = translate(gw, sketch, "An ember.", true, cfg);
        CHECK(after.version == sketch.version + 1);
        CHECK(render(after).find("homophonous") != std::string::npos);
    }
}

TEST_CASE("translate_suite independent mode: same sketch for all, unchanged") {
    auto backend = translator_backend([](const std::string&) {
        return test::fence("NEW_LEXEMES", "novo | thing | noun");
    });
    Gateway gw = test::scripted_gateway(backend);
    LanguageSketch sketch = test::small_sketch();
    std::string before = serialize(sketch);
    std::vector<std::string> sentences;
    for (int i = 0; i < 10; ++i)
        sentences.push_back("Sentence " + std::to_string(i) + ".");
    SuiteResult result = translate_suite(gw, sketch, sentences, true, {});
    CHECK(result.records.size() == 10);
    CHECK(result.errors.empty());
    CHECK(serialize(result.sketch) == before);
}

TEST_CASE("translate_suite corpus mode threads new lexemes into later prompts") {
    int call = 0;
    std::string second_prompt;
    auto backend = std::make_shared<ScriptedBackend>(
        [&](const RenderedRequest& req) -> std::string {
            if (req.template_id == "critic")
                return test::fence("SCORE", "9") + test::fence("ISSUES", "");
            ++call;
            if (call == 2) second_prompt = req.slots.at("SKETCH");
            std::string out = test::fence("TRANSLATION", "aa bb") +
                              test::fence("GLOSS", "AA BB");
            if (call == 1)
                out += test::fence("NEW_LEXEMES", "zumzum | lantern | noun");
            return out;
        });
    Gateway gw = test::scripted_gateway(backend);
    TranslateConfig cfg;
    cfg.clock = [] { return std::string("t0"); };
    SuiteResult result = translate_suite(gw, test::small_sketch(),
                                         {"First one.", "Second one."}, false, cfg);
    CHECK(result.records.size() == 2);
    CHECK(second_prompt.find("zumzum") != std::string::npos);
}

TEST_CASE("translate_suite rejects an empty sentence list") {
    auto backend = translator_backend();
    Gateway gw = test::scripted_gateway(backend);
    CHECK_THROWS_AS(translate_suite(gw, test::small_sketch(), {}, true, {}),
                    std::invalid_argument);
}

TEST_CASE("suite collects per-sentence errors and partial results") {
    auto backend = std::make_shared<ScriptedBackend>(
        [](const RenderedRequest& req) -> std::string {
            if (req.template_id == "critic")
                return test::fence("SCORE", "9") + test::fence("ISSUES", "");
            if (req.slots.at("SOURCE_TEXT").find("bad") != std::string::npos)
                throw ProviderError("refused");
            return test::fence("TRANSLATION", "ok") + test::fence("GLOSS", "OK");
        });
    GatewayConfig gc;
    gc.mode = GatewayMode::live;
    gc.transport_retries = 0;
    gc.default_model_id = "m";
    Gateway gw(gc, backend, test::real_prompts());
    SuiteResult result = translate_suite(gw, test::small_sketch(),
                                         {"good one.", "bad one.", "good two."}, true, {});
    CHECK(result.records.size() == 2);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].find("bad one.") == 0);
}

TEST_CASE("records serialize to jsonl and back") {
    TranslationRecord rec;
    rec.source = "s";
    rec.translation = "t";
    rec.gloss = "g";
    rec.new_lexemes.push_back({"f", "gl", "noun", ""});
    rec.new_rules.push_back({"Rule", "Desc"});
    rec.refine_trace.iterations = {{8, 1}, {9, 0}};
    rec.refine_trace.final_score = 9;
    rec.refine_trace.terminated_by = RefineStop::threshold;
    auto back = deserialize_records(serialize_records({rec}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].source == "s");
    CHECK(back[0].new_lexemes.size() == 1);
    CHECK(back[0].refine_trace.iterations.size() == 2);
    CHECK(back[0].refine_trace.terminated_by == RefineStop::threshold);
}
