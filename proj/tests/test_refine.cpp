#include "conlang/refine.hpp"
#include "conlang/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace conlang;

namespace {

// critic backend scripted by a score/issue sequence; editor appends a marker
std::shared_ptr<ScriptedBackend> scripted_critic(std::vector<int> scores,
                                                 std::vector<int> issue_counts) {
    auto idx = std::make_shared<size_t>(0);
    return std::make_shared<ScriptedBackend>(
        [scores = std::move(scores), issue_counts = std::move(issue_counts),
         idx](const RenderedRequest& req) -> std::string {
            if (req.template_id == "critic") {
                size_t i = std::min(*idx, scores.size() - 1);
                ++*idx;
                std::string issues;
                for (int k = 0; k < issue_counts[i]; ++k)
                    issues += "loc" + std::to_string(k) + " | problem " +
                              std::to_string(k) + "\n";
                return test::fence("SCORE", std::to_string(scores[i])) +
                       test::fence("ISSUES", issues);
            }
            if (req.template_id == "editor")
                return test::fence("REVISED", req.slots.at("CANDIDATE") + "+e");
            throw ProviderError("unexpected template " + req.template_id);
        });
}

}  // namespace

TEST_CASE("critique parses score and issues") {
    auto backend = std::make_shared<ScriptedBackend>();
    backend->push_response(test::fence("SCORE", "5") +
                           test::fence("ISSUES",
                                       "section 2 | vowel chart contradicts prose\n"
                                       "lexicon | duplicate entry for 'water'\n"
                                       "syntax | example violates SOV\n"));
    Gateway gw = test::scripted_gateway(backend);
    CritiqueReport r = critique(gw, "ctx", "cand", {});
    CHECK(r.score == 5);
    REQUIRE(r.issues.size() == 3);
    CHECK(r.issues[0].location == "section 2");
    CHECK(r.issues[1].description == "duplicate entry for 'water'");
}

TEST_CASE("critique: score 9 with no issues") {
    auto backend = std::make_shared<ScriptedBackend>();
    backend->push_response(test::fence("SCORE", "9") + test::fence("ISSUES", ""));
    Gateway gw = test::scripted_gateway(backend);
    CritiqueReport r = critique(gw, "ctx", "cand", {});
    CHECK(r.score == 9);
    CHECK(r.issues.empty());
}

TEST_CASE("out-of-range scores are rejected, not clamped") {
    for (const char* bad : {"11", "0", "-3", "nine"}) {
        auto backend = std::make_shared<ScriptedBackend>();
        backend->push_response(test::fence("SCORE", bad) + test::fence("ISSUES", ""));
        Gateway gw = test::scripted_gateway(backend);
        CHECK_THROWS_AS(critique(gw, "ctx", "cand", {}), ScoreOutOfRange);
    }
}

TEST_CASE("edit requires issues and binds them into the prompt") {
    auto backend = std::make_shared<ScriptedBackend>();
    Gateway gw = test::scripted_gateway(backend);
    CHECK_THROWS_AS(edit(gw, "ctx", "cand", {}, {}), GatewayError);

    backend->push_response(test::fence("REVISED", "better text"));
    std::vector<Issue> issues = {{"lexicon", "the word 'splork' is unpronounceable"}};
    CHECK(edit(gw, "ctx", "cand", issues, {}) == "better text");
    CHECK(backend->requests().back().text.find("splork") != std::string::npos);
}

TEST_CASE("refine_loop stops immediately at threshold, output unchanged") {
    auto backend = scripted_critic({9}, {0});
    Gateway gw = test::scripted_gateway(backend);
    auto [text, trace] = refine_loop(gw, "ctx", "input text", {});
    CHECK(text == "input text");
    CHECK(trace.terminated_by == RefineStop::threshold);
    CHECK(trace.iterations.size() == 1);
    CHECK(backend->call_count() == 1);
}

TEST_CASE("refine_loop hits the cap: 10 critiques, 9 edits") {
    auto backend = scripted_critic(std::vector<int>(12, 5), std::vector<int>(12, 2));
    Gateway gw = test::scripted_gateway(backend);
    RefineConfig cfg;
    auto [text, trace] = refine_loop(gw, "ctx", "seed", cfg);
    CHECK(trace.terminated_by == RefineStop::cap);
    CHECK(trace.iterations.size() == 10);
    int critiques = 0;
    int edits = 0;
    for (const auto& req : backend->requests()) {
        if (req.template_id == "critic") ++critiques;
        if (req.template_id == "editor") ++edits;
    }
    CHECK(critiques == 10);
    CHECK(edits == 9);
    CHECK(text == "seed+e+e+e+e+e+e+e+e+e");  // candidate from edit #9
}

TEST_CASE("refine_loop scripted [6,8,9]: 3 critiques, 2 edits") {
    auto backend = scripted_critic({6, 8, 9}, {1, 1, 0});
    Gateway gw = test::scripted_gateway(backend);
    auto [text, trace] = refine_loop(gw, "ctx", "seed", {});
    CHECK(trace.iterations.size() == 3);
    CHECK(trace.final_score == 9);
    CHECK(trace.terminated_by == RefineStop::threshold);
    CHECK(text == "seed+e+e");
}

TEST_CASE("empty issue list terminates even below threshold") {
    auto backend = scripted_critic({4}, {0});
    Gateway gw = test::scripted_gateway(backend);
    auto [text, trace] = refine_loop(gw, "ctx", "seed", {});
    CHECK(trace.terminated_by == RefineStop::no_issues);
    CHECK(text == "seed");
}

TEST_CASE("mid-loop error returns best candidate so far with marker") {
    auto idx = std::make_shared<int>(0);
    auto backend = std::make_shared<ScriptedBackend>(
        [idx](const RenderedRequest& req) -> std::string {
            if (req.template_id == "critic") {
                if (++*idx >= 2) throw ProviderError("model down");
                return test::fence("SCORE", "3") + test::fence("ISSUES", "a | b");
            }
            return test::fence("REVISED", "improved");
        });
    GatewayConfig gc;
    gc.mode = GatewayMode::live;
    gc.transport_retries = 0;
    Gateway gw(gc, backend, test::real_prompts());
    auto [text, trace] = refine_loop(gw, "ctx", "seed", {});
    CHECK(text == "improved");
    CHECK(trace.terminated_by == RefineStop::error);
    CHECK_FALSE(trace.error.empty());
}

TEST_CASE("fuzzed critics never exceed the critique bound") {
    SeededRng rng(7, "refine-fuzz");
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<int> scores;
        std::vector<int> issue_counts;
        for (int i = 0; i < 12; ++i) {
            scores.push_back(rng.uniform_int(1, 10));
            issue_counts.push_back(rng.uniform_int(0, 4));
        }
        auto backend = scripted_critic(scores, issue_counts);
        Gateway gw = test::scripted_gateway(backend);
        auto [text, trace] = refine_loop(gw, "ctx", "seed", {});
        size_t critiques = 0;
        for (const auto& req : backend->requests())
            if (req.template_id == "critic") ++critiques;
        CHECK(critiques <= 10);
        CHECK(trace.iterations.size() == critiques);
    }
}
