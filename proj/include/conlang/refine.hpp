#pragma once

#include <string>
#include <utility>
#include <vector>

#include "conlang/gateway.hpp"

namespace conlang {

struct Issue {
    std::string location;
    std::string description;
};

struct CritiqueReport {
    int score = 0;  // 1..10
    std::vector<Issue> issues;
};

struct RefineConfig {
    int threshold = 9;
    int max_iterations = 10;
    std::string critic_model_id;  // empty -> gateway default
    std::string editor_model_id;
};

enum class RefineStop { threshold, cap, no_issues, error };

const char* to_string(RefineStop stop);

struct RefineIteration {
    int score;
    int issue_count;
};

struct RefineTrace {
    std::vector<RefineIteration> iterations;
    int final_score = 0;
    RefineStop terminated_by = RefineStop::threshold;
    std::string error;  // non-empty only when terminated_by == error
};

struct ScoreOutOfRange : FieldError {
    explicit ScoreOutOfRange(const std::string& got)
        : FieldError("critic score out of range [1,10]: " + got) {}
};

/// One critic pass: score in [1,10] plus itemized issues.
CritiqueReport critique(Gateway& gateway, const std::string& context,
                        const std::string& candidate, const RefineConfig& cfg);

/// One editor pass; `issues` must be non-empty.
std::string edit(Gateway& gateway, const std::string& context,
                 const std::string& candidate, const std::vector<Issue>& issues,
                 const RefineConfig& cfg);

/// Critic/editor loop: critique, then edit while score < threshold and issues
/// remain, up to cfg.max_iterations critiques. Stops without a final edit when
/// the cap is the terminator. On mid-loop errors returns the best candidate so
/// far with an error marker in the trace.
std::pair<std::string, RefineTrace> refine_loop(Gateway& gateway,
                                                const std::string& context,
                                                const std::string& candidate,
                                                const RefineConfig& cfg);

std::string format_issues(const std::vector<Issue>& issues);

}  // namespace conlang
