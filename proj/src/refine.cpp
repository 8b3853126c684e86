#include "conlang/refine.hpp"

#include <cassert>

#include "conlang/util.hpp"

namespace conlang {

namespace {

std::vector<Issue> parse_issues(const std::string& text) {
    std::vector<Issue> issues;
    for (const std::string& line : split_lines(text)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t bar = t.find('|');
        Issue issue;
        if (bar == std::string::npos) {
            issue.location = "(unspecified)";
            issue.description = t;
        } else {
            issue.location = trim(t.substr(0, bar));
            issue.description = trim(t.substr(bar + 1));
        }
        issues.push_back(std::move(issue));
    }
    return issues;
}

}  // namespace

const char* to_string(RefineStop stop) {
    switch (stop) {
        case RefineStop::threshold: return "threshold";
        case RefineStop::cap: return "cap";
        case RefineStop::no_issues: return "no_issues";
        case RefineStop::error: return "error";
    }
    return "?";
}

CritiqueReport critique(Gateway& gateway, const std::string& context,
                        const std::string& candidate, const RefineConfig& cfg) {
    if (candidate.empty()) throw GatewayError("critique: candidate must be non-empty");
    PromptRequest req;
    req.template_id = "critic";
    req.slots = {{"CONTEXT", context}, {"CANDIDATE", candidate}};
    req.model_id = cfg.critic_model_id;
    StructuredResponse resp = gateway.complete_structured(
        req, FieldSchema{{"SCORE"}, {"ISSUES"}});

    CritiqueReport report;
    std::string score_text = trim(resp.at("SCORE"));
    size_t used = 0;
    int score = 0;
    try {
        score = std::stoi(score_text, &used);
    } catch (const std::exception&) {
        throw ScoreOutOfRange(score_text);
    }
    if (used != score_text.size() || score < 1 || score > 10)
        throw ScoreOutOfRange(score_text);
    report.score = score;
    report.issues = parse_issues(resp.get_or("ISSUES"));
    return report;
}

std::string format_issues(const std::vector<Issue>& issues) {
    std::string out;
    for (const Issue& issue : issues) {
        out += issue.location + " | " + issue.description + "\n";
    }
    return out;
}

std::string edit(Gateway& gateway, const std::string& context,
                 const std::string& candidate, const std::vector<Issue>& issues,
                 const RefineConfig& cfg) {
    if (issues.empty()) throw GatewayError("edit: issues must be non-empty");
    PromptRequest req;
    req.template_id = "editor";
    req.slots = {{"CONTEXT", context},
                 {"CANDIDATE", candidate},
                 {"ISSUES", format_issues(issues)}};
    req.model_id = cfg.editor_model_id;
    StructuredResponse resp =
        gateway.complete_structured(req, FieldSchema{{"REVISED"}, {}});
    return resp.at("REVISED");
}

std::pair<std::string, RefineTrace> refine_loop(Gateway& gateway,
                                                const std::string& context,
                                                const std::string& candidate,
                                                const RefineConfig& cfg) {
    RefineTrace trace;
    std::string current = candidate;
    try {
        for (int i = 1; i <= cfg.max_iterations; ++i) {
            CritiqueReport report = critique(gateway, context, current, cfg);
            trace.iterations.push_back(
                {report.score, static_cast<int>(report.issues.size())});
            trace.final_score = report.score;
            if (report.score >= cfg.threshold) {
                trace.terminated_by = RefineStop::threshold;
                return {current, trace};
            }
            if (report.issues.empty()) {
                trace.terminated_by = RefineStop::no_issues;
                return {current, trace};
            }
            if (i == cfg.max_iterations) {
                trace.terminated_by = RefineStop::cap;
                return {current, trace};
            }
            current = edit(gateway, context, current, report.issues, cfg);
        }
    } catch (const std::exception& e) {
        trace.terminated_by = RefineStop::error;
        trace.error = e.what();
        return {current, trace};
    }
    // unreachable: the loop always returns by threshold, no_issues or cap
    assert(false);
    trace.terminated_by = RefineStop::cap;
    return {current, trace};
}

}  // namespace conlang
