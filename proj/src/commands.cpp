#include "conlang/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <future>

#include "conlang/bootstrap.hpp"
#include "conlang/canned_backend.hpp"
#include "conlang/evaluator.hpp"
#include "conlang/report.hpp"
#include "conlang/sketch.hpp"
#include "conlang/translator.hpp"
#include "conlang/util.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace conlang {

namespace {

std::string language_id(uint64_t seed) { return "lang-" + to_hex_u64(seed); }

bool replaying(const RunConfig& config) { return config.gateway_mode == "replay"; }

std::function<std::string()> make_clock(const RunConfig& config) {
    // replay runs must be byte-deterministic, so they use a fixed timestamp
    if (replaying(config)) return [] { return std::string("1970-01-01T00:00:00Z"); };
    return default_timestamp;
}

BootstrapConfig make_bootstrap_config(const RunConfig& config) {
    BootstrapConfig cfg;
    cfg.model_id = config.generator_model_id;
    cfg.refine.threshold = config.refine_threshold;
    cfg.refine.max_iterations = config.refine_max_iterations;
    cfg.lexicon_size = config.lexicon_size;
    cfg.clock = make_clock(config);
    return cfg;
}

TranslateConfig make_translate_config(const RunConfig& config) {
    TranslateConfig cfg;
    cfg.model_id = config.generator_model_id;
    cfg.refine.threshold = config.refine_threshold;
    cfg.refine.max_iterations = config.refine_max_iterations;
    cfg.clock = make_clock(config);
    return cfg;
}

void write_manifest(const RunConfig& config, const nlohmann::json& languages) {
    nlohmann::json manifest;
    manifest["mode"] = config.gateway_mode;
    manifest["generator_model_id"] = config.generator_model_id;
    manifest["judge_model_id"] = config.judge_model_id;
    manifest["languages"] = languages;
    atomic_write_file((fs::path(config.output_dir) / "run.manifest.json").string(),
                      manifest.dump(2) + "\n");
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    RunConfig c;
    auto str = [&](const char* key, std::string& out) {
        if (j.contains(key)) out = j.at(key).get<std::string>();
    };
    str("generator_model_id", c.generator_model_id);
    str("judge_model_id", c.judge_model_id);
    str("user_constraint", c.user_constraint);
    str("gateway_mode", c.gateway_mode);
    str("fixtures_path", c.fixtures_path);
    str("output_dir", c.output_dir);
    str("backend", c.backend);
    str("prompts_dir", c.prompts_dir);
    str("data_dir", c.data_dir);
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
    if (j.contains("refine_threshold")) c.refine_threshold = j.at("refine_threshold").get<int>();
    if (j.contains("refine_max_iterations"))
        c.refine_max_iterations = j.at("refine_max_iterations").get<int>();
    if (j.contains("n_languages")) c.n_languages = j.at("n_languages").get<int>();
    if (j.contains("independent_translation"))
        c.independent_translation = j.at("independent_translation").get<bool>();
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
    if (j.contains("lexicon_size")) c.lexicon_size = j.at("lexicon_size").get<int>();
    return c;
}

void validate_config(const RunConfig& config) {
    if (config.gateway_mode != "live" && config.gateway_mode != "record" &&
        config.gateway_mode != "replay")
        throw ConfigError("gateway_mode must be live, record or replay");
    if (config.gateway_mode != "live" && config.fixtures_path.empty())
        throw ConfigError("mode '" + config.gateway_mode + "' requires --fixtures");
    if (replaying(config) && !fs::exists(config.fixtures_path))
        throw ConfigError("fixtures file not found: " + config.fixtures_path);
    if (config.refine_threshold < 1 || config.refine_threshold > 10)
        throw ConfigError("refine_threshold must be in [1,10]");
    if (config.refine_max_iterations < 1)
        throw ConfigError("refine_max_iterations must be >= 1");
    if (config.n_languages < 1) throw ConfigError("n_languages must be >= 1");
    if (config.backend != "http" && config.backend != "canned")
        throw ConfigError("backend must be http or canned");
    if (config.judge_model_id == config.generator_model_id)
        std::fprintf(stderr,
                     "[config] warning: judge model equals generator model (%s); "
                     "judgements may be biased\n",
                     config.judge_model_id.c_str());
}

Gateway make_gateway(const RunConfig& config) {
    validate_config(config);
    GatewayConfig gc;
    gc.mode = gateway_mode_from_string(config.gateway_mode);
    gc.fixtures_path = config.fixtures_path;
    gc.default_model_id = config.generator_model_id;
    std::shared_ptr<Backend> backend;
    if (config.backend == "canned")
        backend = std::make_shared<CannedBackend>();
    else
        backend = std::make_shared<HttpBackend>();
    return Gateway(gc, std::move(backend), PromptLibrary(config.prompts_dir));
}

std::vector<std::string> read_sentences_file(const std::string& path) {
    std::vector<std::string> sentences;
    for (const std::string& line : split_lines(read_file(path))) {
        std::string t = trim(line);
        if (!t.empty()) sentences.push_back(std::move(t));
    }
    if (sentences.empty()) throw ConfigError("no sentences in " + path);
    return sentences;
}

int cmd_generate(const RunConfig& config) {
    Gateway gateway = make_gateway(config);
    BootstrapConfig cfg = make_bootstrap_config(config);
    fs::create_directories(config.output_dir);

    struct Outcome {
        std::string id;
        uint64_t seed;
        std::string status;
        std::string error;
        double seconds;
    };
    auto run_one = [&](int i) {
        uint64_t seed = config.seed + static_cast<uint64_t>(i);
        std::string id = language_id(seed);
        Outcome outcome{id, seed, "ok", "", 0.0};
        auto t0 = std::chrono::steady_clock::now();
        LanguageSketch sketch;
        try {
            sketch = bootstrap(gateway, seed, config.user_constraint, cfg, id);
        } catch (const StageFailure& e) {
            outcome.status = "failed";
            outcome.error = e.what();
            sketch = e.partial;
            sketch.provenance.push_back({"failure", cfg.clock(), "",
                                         std::string("stage ") + e.stage + ": " +
                                             e.what()});
        } catch (const std::exception& e) {
            outcome.status = "failed";
            outcome.error = e.what();
            outcome.seconds = 0.0;
            return outcome;
        }
        atomic_write_file(
            (fs::path(config.output_dir) / (id + ".sketch.json")).string(),
            serialize(sketch));
        outcome.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return outcome;
    };

    std::vector<Outcome> outcomes;
    if (config.jobs > 1) {
        std::vector<std::future<Outcome>> futures;
        for (int i = 0; i < config.n_languages; ++i)
            futures.push_back(std::async(std::launch::async, run_one, i));
        for (auto& f : futures) outcomes.push_back(f.get());
    } else {
        for (int i = 0; i < config.n_languages; ++i) outcomes.push_back(run_one(i));
    }

    nlohmann::json languages = nlohmann::json::array();
    int failures = 0;
    for (const Outcome& o : outcomes) {
        if (o.status != "ok") ++failures;
        languages.push_back({{"id", o.id},
                             {"seed", o.seed},
                             {"status", o.status},
                             {"error", o.error},
                             {"model_id", config.generator_model_id},
                             {"seconds", o.seconds}});
        std::fprintf(stderr, "[generate] %s: %s\n", o.id.c_str(), o.status.c_str());
    }
    write_manifest(config, languages);
    return failures == 0 ? 0 : 1;
}

int cmd_translate(const RunConfig& config, const std::string& sketch_path,
                  const std::string& sentences_path) {
    Gateway gateway = make_gateway(config);
    LanguageSketch sketch = deserialize(read_file(sketch_path));
    std::vector<std::string> sentences = read_sentences_file(sentences_path);
    TranslateConfig cfg = make_translate_config(config);

    SuiteResult result = translate_suite(gateway, sketch, sentences,
                                         config.independent_translation, cfg);
    fs::create_directories(config.output_dir);
    std::string out_path =
        (fs::path(config.output_dir) / (sketch.id + ".translations.jsonl")).string();
    atomic_write_file(out_path, serialize_records(result.records));
    if (!config.independent_translation) {
        // corpus mode may have grown the sketch; persist the updated snapshot
        atomic_write_file(
            (fs::path(config.output_dir) / (sketch.id + ".sketch.json")).string(),
            serialize(result.sketch));
    }
    if (!result.errors.empty()) {
        nlohmann::json err;
        err["sketch"] = sketch.id;
        err["errors"] = result.errors;
        atomic_write_file((fs::path(config.output_dir) /
                           (sketch.id + ".translate_errors.json"))
                              .string(),
                          err.dump(2) + "\n");
        for (const std::string& e : result.errors)
            std::fprintf(stderr, "[translate] error: %s\n", e.c_str());
        return 1;
    }
    return 0;
}

int cmd_evaluate(const RunConfig& config,
                 const std::vector<std::string>& sketch_paths,
                 const std::vector<std::string>& translations_paths) {
    Gateway gateway = make_gateway(config);
    std::string feature_file =
        (fs::path(config.data_dir) / "wals_features.json").string();
    std::string checksum = feature_file_checksum(feature_file);
    if (checksum != kWalsFeaturesSha256)
        throw ConfigError("feature-set checksum mismatch for " + feature_file +
                          ": got " + checksum);
    WalsFeatureSet feature_set = load_feature_set(feature_file);
    EvalConfig eval_cfg{config.judge_model_id};

    std::vector<LanguageSketch> sketches;
    for (const std::string& path : sketch_paths)
        sketches.push_back(deserialize(read_file(path)));

    std::map<std::string, std::vector<TranslationRecord>> records_by_id;
    for (const std::string& path : translations_paths) {
        std::string stem = fs::path(path).filename().string();
        size_t dot = stem.find(".translations");
        if (dot != std::string::npos) stem = stem.substr(0, dot);
        records_by_id[stem] = deserialize_records(read_file(path));
    }

    nlohmann::json metrics;
    fs::create_directories(config.output_dir);

    // diversity
    bool diversity_available = sketches.size() >= 2;
    metrics["diversity_available"] = diversity_available;
    if (diversity_available) {
        std::vector<WalsProfile> profiles;
        std::vector<std::string> ids;
        nlohmann::json profile_json = nlohmann::json::array();
        for (const LanguageSketch& sketch : sketches) {
            WalsProfile p = encode_profile(gateway, sketch, feature_set, eval_cfg);
            nlohmann::json values = nlohmann::json::array();
            for (const auto& v : p.values)
                values.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
            profile_json.push_back({{"language_id", p.language_id},
                                    {"values", std::move(values)}});
            ids.push_back(p.language_id);
            profiles.push_back(std::move(p));
        }
        metrics["profiles"] = std::move(profile_json);
        try {
            DiversityResult d = diversity(profiles);
            std::string matrix_path =
                (fs::path(config.output_dir) / "eval.distances.csv").string();
            export_distance_matrix(d, ids, matrix_path);
            metrics["d_mean"] = d.d_mean;
            metrics["n_languages"] = d.n_languages;
            metrics["distance_matrix_file"] = "eval.distances.csv";
        } catch (const NoComparablePairs& e) {
            metrics["diversity_available"] = false;
            metrics["diversity_error"] = e.what();
        }
    } else {
        metrics["diversity_error"] = "diversity needs at least 2 sketches";
    }

    auto consistency_json = [](const ConsistencyResult& r) {
        nlohmann::json per_item = nlohmann::json::array();
        for (const VerdictItem& item : r.per_item)
            per_item.push_back({{"item", item.item},
                                {"verdict", item.verdict},
                                {"judge_rationale", item.judge_rationale}});
        return nlohmann::json{
            {"kind", r.kind == ConsistencyKind::language ? "language" : "translation"},
            {"n_consistent", r.n_consistent},
            {"n_total", r.n_total},
            {"rate", r.rate},
            {"per_item", std::move(per_item)}};
    };

    nlohmann::json lang_results = nlohmann::json::array();
    nlohmann::json trans_results = nlohmann::json::array();
    double lang_sum = 0.0;
    double trans_sum = 0.0;
    int trans_count = 0;
    for (const LanguageSketch& sketch : sketches) {
        ConsistencyResult lr =
            language_consistency(gateway, sketch, eval_cfg, 5, sketch.seed);
        lang_sum += lr.rate;
        nlohmann::json entry = consistency_json(lr);
        entry["language_id"] = sketch.id;
        lang_results.push_back(std::move(entry));

        auto it = records_by_id.find(sketch.id);
        if (it != records_by_id.end() && !it->second.empty()) {
            ConsistencyResult tr =
                translation_consistency(gateway, sketch, it->second, eval_cfg);
            trans_sum += tr.rate;
            ++trans_count;
            nlohmann::json tentry = consistency_json(tr);
            tentry["language_id"] = sketch.id;
            trans_results.push_back(std::move(tentry));
        }
    }
    metrics["language_consistency"] = std::move(lang_results);
    metrics["translation_consistency"] = std::move(trans_results);
    metrics["aggregates"] = {
        {"language_rate_mean",
         sketches.empty() ? 0.0 : lang_sum / static_cast<double>(sketches.size())},
        {"translation_rate_mean",
         trans_count == 0 ? 0.0 : trans_sum / static_cast<double>(trans_count)}};

    atomic_write_file((fs::path(config.output_dir) / "eval.metrics.json").string(),
                      metrics.dump(2) + "\n");
    return 0;
}

int cmd_report(const std::string& output_dir) {
    std::vector<LanguageReportInput> languages;
    std::vector<fs::path> sketch_files;
    for (const auto& entry : fs::directory_iterator(output_dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() > 12 && name.substr(name.size() - 12) == ".sketch.json")
            sketch_files.push_back(entry.path());
    }
    if (sketch_files.empty()) {
        std::fprintf(stderr, "[report] no .sketch.json files in %s\n",
                     output_dir.c_str());
        return 1;
    }
    std::sort(sketch_files.begin(), sketch_files.end());
    for (const fs::path& path : sketch_files) {
        LanguageReportInput input;
        input.sketch = deserialize(read_file(path.string()));
        fs::path translations =
            fs::path(output_dir) / (input.sketch.id + ".translations.jsonl");
        if (fs::exists(translations))
            input.records = deserialize_records(read_file(translations.string()));
        languages.push_back(std::move(input));
    }

    ReportMetricsSummary summary;
    fs::path metrics_path = fs::path(output_dir) / "eval.metrics.json";
    if (fs::exists(metrics_path)) {
        nlohmann::json m = nlohmann::json::parse(read_file(metrics_path.string()));
        if (m.value("diversity_available", false) && m.contains("d_mean")) {
            summary.has_diversity = true;
            summary.d_mean = m.at("d_mean").get<double>();
        }
        if (m.contains("aggregates")) {
            summary.has_language_consistency = true;
            summary.language_rate =
                m.at("aggregates").at("language_rate_mean").get<double>();
            summary.has_translation_consistency = true;
            summary.translation_rate =
                m.at("aggregates").at("translation_rate_mean").get<double>();
        }
    }
    emit_report(languages, summary, (fs::path(output_dir) / "html").string());
    return 0;
}

int cmd_baseline(const RunConfig& config, const std::string& sentences_path) {
    Gateway gateway = make_gateway(config);
    std::vector<std::string> sentences = read_sentences_file(sentences_path);
    BootstrapConfig cfg = make_bootstrap_config(config);
    std::string id = "base-" + to_hex_u64(config.seed);
    auto [sketch, records] =
        generate_baseline(gateway, config.user_constraint, sentences, cfg,
                          config.seed, id);
    fs::create_directories(config.output_dir);
    atomic_write_file((fs::path(config.output_dir) / (id + ".sketch.json")).string(),
                      serialize(sketch));
    atomic_write_file(
        (fs::path(config.output_dir) / (id + ".translations.jsonl")).string(),
        serialize_records(records));
    return 0;
}

}  // namespace conlang
