#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conlang/gateway.hpp"
#include "conlang/sketch.hpp"
#include "conlang/translator_types.hpp"

namespace conlang {

struct WalsFeature {
    std::string wals_number;
    std::string name;
    std::vector<std::string> allowed_values;
};

struct WalsFeatureSet {
    std::vector<WalsFeature> features;  // fixed order, k = 16 for the shipped set
};

/// Judge answer used for a feature the sketch leaves unspecified.
inline constexpr const char* kNullValue = "unspecified";

struct WalsProfile {
    std::string language_id;
    std::vector<std::optional<std::string>> values;  // one per feature, null allowed
};

struct DiversityResult {
    double d_mean = 0.0;
    // pairwise[i][j]: normalized mismatch over mutually non-null features;
    // nullopt when a pair has no comparable features. Symmetric, zero diagonal.
    std::vector<std::vector<std::optional<double>>> pairwise;
    size_t n_languages = 0;
};

struct TooFewProfiles : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoComparablePairs : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ConsistencyKind { language, translation };

struct VerdictItem {
    std::string item;
    bool verdict;
    std::string judge_rationale;
};

struct ConsistencyResult {
    ConsistencyKind kind;
    int n_consistent = 0;
    int n_total = 0;
    double rate = 0.0;
    std::vector<VerdictItem> per_item;
};

struct EvalConfig {
    std::string judge_model_id;  // empty -> gateway default
};

WalsFeatureSet load_feature_set(const std::string& path);
/// Checksum of the shipped feature definition file (sha256 of its bytes).
std::string feature_file_checksum(const std::string& path);

/// Judge-based typological profile: one categorical value (or null) per
/// feature. Out-of-vocabulary answers get one structured retry, then null.
WalsProfile encode_profile(Gateway& gateway, const LanguageSketch& sketch,
                           const WalsFeatureSet& feature_set, const EvalConfig& cfg);

/// Mean pairwise normalized mismatch over mutually non-null features.
DiversityResult diversity(const std::vector<WalsProfile>& profiles);

/// Samples up to per_section sentences per section and asks the judge for a
/// consistent/inconsistent verdict on each.
ConsistencyResult language_consistency(Gateway& gateway, const LanguageSketch& sketch,
                                       const EvalConfig& cfg, int per_section = 5,
                                       uint64_t rng_seed = 0);

/// Judge verdict per translation record; unparseable verdicts count as
/// inconsistent with a parse-failure rationale.
ConsistencyResult translation_consistency(Gateway& gateway,
                                          const LanguageSketch& sketch,
                                          const std::vector<TranslationRecord>& records,
                                          const EvalConfig& cfg);

/// CSV with a language-id header row and column; null pairs as empty cells.
void export_distance_matrix(const DiversityResult& result,
                            const std::vector<std::string>& language_ids,
                            const std::string& path);

}  // namespace conlang
