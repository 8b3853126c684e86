#include "conlang/evaluator.hpp"

#include <algorithm>
#include <cstdio>

#include "conlang/util.hpp"
#include "json.hpp"

namespace conlang {

namespace {

std::string allowed_values_slot(const WalsFeature& feature) {
    std::string out;
    for (const std::string& v : feature.allowed_values) out += "- " + v + "\n";
    out += std::string("- ") + kNullValue + " (when the sketch does not determine it)\n";
    return out;
}

bool verdict_from_text(const std::string& text) {
    std::string t = trim(text);
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "consistent" || t == "yes" || t == "true") return true;
    if (t == "inconsistent" || t == "no" || t == "false") return false;
    throw FieldError("unrecognized VERDICT: " + text);
}

ConsistencyResult finish_result(ConsistencyKind kind, std::vector<VerdictItem> items) {
    ConsistencyResult result;
    result.kind = kind;
    result.per_item = std::move(items);
    result.n_total = static_cast<int>(result.per_item.size());
    for (const VerdictItem& item : result.per_item)
        if (item.verdict) ++result.n_consistent;
    result.rate = result.n_total == 0
                      ? 0.0
                      : static_cast<double>(result.n_consistent) / result.n_total;
    return result;
}

}  // namespace

WalsFeatureSet load_feature_set(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    WalsFeatureSet set;
    for (const auto& f : j.at("features")) {
        WalsFeature feature;
        feature.wals_number = f.at("wals_number").get<std::string>();
        feature.name = f.at("name").get<std::string>();
        for (const auto& v : f.at("allowed_values"))
            feature.allowed_values.push_back(v.get<std::string>());
        if (feature.allowed_values.empty())
            throw std::runtime_error("feature with no allowed values: " + feature.name);
        set.features.push_back(std::move(feature));
    }
    return set;
}

std::string feature_file_checksum(const std::string& path) {
    return sha256_hex(read_file(path));
}

WalsProfile encode_profile(Gateway& gateway, const LanguageSketch& sketch,
                           const WalsFeatureSet& feature_set, const EvalConfig& cfg) {
    WalsProfile profile;
    profile.language_id = sketch.id;
    const std::string sketch_text = render(sketch);
    for (const WalsFeature& feature : feature_set.features) {
        std::optional<std::string> value;
        std::string retry_note;
        for (int attempt = 0; attempt < 2; ++attempt) {
            PromptRequest req;
            req.template_id = "wals_feature";
            req.model_id = cfg.judge_model_id;
            req.slots = {{"SKETCH", sketch_text},
                         {"FEATURE_NAME", feature.name},
                         {"ALLOWED_VALUES", allowed_values_slot(feature)},
                         {"RETRY_NOTE", retry_note}};
            StructuredResponse resp =
                gateway.complete_structured(req, FieldSchema{{"VALUE"}, {}});
            std::string answer = trim(resp.at("VALUE"));
            if (answer == kNullValue) {
                value = std::nullopt;
                break;
            }
            auto it = std::find(feature.allowed_values.begin(),
                                feature.allowed_values.end(), answer);
            if (it != feature.allowed_values.end()) {
                value = answer;
                break;
            }
            retry_note = "Your previous answer '" + answer +
                         "' is not one of the allowed values. Pick exactly one "
                         "allowed value, or '" + std::string(kNullValue) + "'.";
            if (attempt == 1) {
                std::fprintf(stderr,
                             "[evaluator] %s: judge value '%s' not allowed for '%s', "
                             "recording null\n",
                             sketch.id.c_str(), answer.c_str(), feature.name.c_str());
                value = std::nullopt;
            }
        }
        profile.values.push_back(std::move(value));
    }
    return profile;
}

DiversityResult diversity(const std::vector<WalsProfile>& profiles) {
    if (profiles.size() < 2)
        throw TooFewProfiles("diversity needs at least 2 profiles, got " +
                             std::to_string(profiles.size()));
    const size_t n = profiles.size();
    const size_t k = profiles[0].values.size();
    for (const WalsProfile& p : profiles)
        if (p.values.size() != k)
            throw std::invalid_argument("profiles span different feature sets");

    DiversityResult result;
    result.n_languages = n;
    result.pairwise.assign(n, std::vector<std::optional<double>>(n, std::nullopt));
    double sum = 0.0;
    size_t included_pairs = 0;
    for (size_t i = 0; i < n; ++i) {
        result.pairwise[i][i] = 0.0;
        for (size_t j = i + 1; j < n; ++j) {
            size_t comparable = 0;
            size_t differing = 0;
            for (size_t f = 0; f < k; ++f) {
                const auto& a = profiles[i].values[f];
                const auto& b = profiles[j].values[f];
                if (!a || !b) continue;
                ++comparable;
                if (*a != *b) ++differing;
            }
            if (comparable == 0) continue;  // excluded pair, stays null
            double d = static_cast<double>(differing) / static_cast<double>(comparable);
            result.pairwise[i][j] = d;
            result.pairwise[j][i] = d;
            sum += d;
            ++included_pairs;
        }
    }
    if (included_pairs == 0)
        throw NoComparablePairs("every pair has zero mutually non-null features");
    result.d_mean = sum / static_cast<double>(included_pairs);
    return result;
}

ConsistencyResult language_consistency(Gateway& gateway, const LanguageSketch& sketch,
                                       const EvalConfig& cfg, int per_section,
                                       uint64_t rng_seed) {
    auto samples = sample_sentences(sketch, per_section, rng_seed);
    const std::string sketch_text = render(sketch);
    std::vector<VerdictItem> items;
    for (const auto& [kind, sentence] : samples) {
        PromptRequest req;
        req.template_id = "judge_sentence";
        req.model_id = cfg.judge_model_id;
        req.slots = {{"SKETCH", sketch_text}, {"SENTENCE", sentence}};
        VerdictItem item;
        item.item = std::string(to_string(kind)) + ": " + sentence;
        try {
            StructuredResponse resp = gateway.complete_structured(
                req, FieldSchema{{"VERDICT"}, {"RATIONALE"}});
            item.verdict = verdict_from_text(resp.at("VERDICT"));
            item.judge_rationale = trim(resp.get_or("RATIONALE"));
        } catch (const StructuredOutputFailure& e) {
            item.verdict = false;
            item.judge_rationale = std::string("judge verdict unparseable: ") + e.what();
        } catch (const FieldError& e) {
            item.verdict = false;
            item.judge_rationale = std::string("judge verdict unparseable: ") + e.what();
        }
        items.push_back(std::move(item));
    }
    return finish_result(ConsistencyKind::language, std::move(items));
}

ConsistencyResult translation_consistency(Gateway& gateway,
                                          const LanguageSketch& sketch,
                                          const std::vector<TranslationRecord>& records,
                                          const EvalConfig& cfg) {
    if (records.empty())
        throw std::invalid_argument("translation_consistency: records must be non-empty");
    const std::string sketch_text = render(sketch);
    std::vector<VerdictItem> items;
    for (const TranslationRecord& rec : records) {
        PromptRequest req;
        req.template_id = "judge_translation";
        req.model_id = cfg.judge_model_id;
        req.slots = {{"SKETCH", sketch_text},
                     {"SOURCE_TEXT", rec.source},
                     {"TRANSLATION", rec.translation},
                     {"GLOSS", rec.gloss}};
        VerdictItem item;
        item.item = rec.source;
        try {
            StructuredResponse resp = gateway.complete_structured(
                req, FieldSchema{{"VERDICT"}, {"RATIONALE"}});
            item.verdict = verdict_from_text(resp.at("VERDICT"));
            item.judge_rationale = trim(resp.get_or("RATIONALE"));
        } catch (const StructuredOutputFailure& e) {
            item.verdict = false;
            item.judge_rationale = std::string("judge verdict unparseable: ") + e.what();
        } catch (const FieldError& e) {
            item.verdict = false;
            item.judge_rationale = std::string("judge verdict unparseable: ") + e.what();
        }
        items.push_back(std::move(item));
    }
    return finish_result(ConsistencyKind::translation, std::move(items));
}

void export_distance_matrix(const DiversityResult& result,
                            const std::vector<std::string>& language_ids,
                            const std::string& path) {
    if (language_ids.size() != result.n_languages)
        throw std::invalid_argument("language_ids size does not match matrix");
    std::string out;
    for (const std::string& id : language_ids) out += "," + id;
    out += "\n";
    char buf[32];
    for (size_t i = 0; i < result.n_languages; ++i) {
        out += language_ids[i];
        for (size_t j = 0; j < result.n_languages; ++j) {
            out += ",";
            if (result.pairwise[i][j]) {
                std::snprintf(buf, sizeof(buf), "%.12f", *result.pairwise[i][j]);
                out += buf;
            }
        }
        out += "\n";
    }
    atomic_write_file(path, out);
}

}  // namespace conlang
