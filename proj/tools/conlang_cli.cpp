#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conlang/commands.hpp"

namespace {

void add_common_flags(CLI::App* cmd, std::string& config_path,
                      conlang::RunConfig& overrides,
                      std::vector<std::string>& set_flags) {
    cmd->add_option("--config", config_path, "JSON config file (flags win)");
    auto track = [&set_flags](const std::string& name) {
        return [&set_flags, name](const std::string&) { set_flags.push_back(name); };
    };
    cmd->add_option("--seed", overrides.seed, "base RNG seed")
        ->each(track("seed"));
    cmd->add_option("--constraint", overrides.user_constraint,
                    "free-text user constraint")
        ->each(track("constraint"));
    cmd->add_option("--model", overrides.generator_model_id, "generator model id")
        ->each(track("model"));
    cmd->add_option("--judge-model", overrides.judge_model_id, "judge model id")
        ->each(track("judge-model"));
    cmd->add_option("--mode", overrides.gateway_mode, "live|record|replay")
        ->each(track("mode"));
    cmd->add_option("--fixtures", overrides.fixtures_path, "fixtures .jsonl path")
        ->each(track("fixtures"));
    cmd->add_option("--out", overrides.output_dir, "output directory")
        ->each(track("out"));
    cmd->add_option("--n", overrides.n_languages, "number of languages")
        ->each(track("n"));
    cmd->add_option("--jobs", overrides.jobs, "parallel language jobs")
        ->each(track("jobs"));
    cmd->add_option("--backend", overrides.backend,
                    "model backend: http (default) or canned (offline stand-in)")
        ->each(track("backend"));
    cmd->add_option("--prompts-dir", overrides.prompts_dir, "prompt templates dir")
        ->each(track("prompts-dir"));
    cmd->add_option("--data-dir", overrides.data_dir, "data files dir")
        ->each(track("data-dir"));
    cmd->add_option("--refine-threshold", overrides.refine_threshold,
                    "critic score needed to stop refining")
        ->each(track("refine-threshold"));
    cmd->add_option("--refine-max-iterations", overrides.refine_max_iterations,
                    "refine iteration cap")
        ->each(track("refine-max-iterations"));
    cmd->add_flag("--dependent", [&set_flags](size_t) { set_flags.push_back("dependent"); },
                  "corpus mode: thread sketch updates through the suite");
}

conlang::RunConfig resolve_config(const std::string& config_path,
                                  const conlang::RunConfig& overrides,
                                  const std::vector<std::string>& set_flags) {
    conlang::RunConfig config;
    if (!config_path.empty()) config = conlang::load_run_config(config_path);
    auto set = [&](const std::string& name) {
        for (const std::string& f : set_flags)
            if (f == name) return true;
        return false;
    };
    if (set("seed")) config.seed = overrides.seed;
    if (set("constraint")) config.user_constraint = overrides.user_constraint;
    if (set("model")) config.generator_model_id = overrides.generator_model_id;
    if (set("judge-model")) config.judge_model_id = overrides.judge_model_id;
    if (set("mode")) config.gateway_mode = overrides.gateway_mode;
    if (set("fixtures")) config.fixtures_path = overrides.fixtures_path;
    if (set("out")) config.output_dir = overrides.output_dir;
    if (set("n")) config.n_languages = overrides.n_languages;
    if (set("jobs")) config.jobs = overrides.jobs;
    if (set("backend")) config.backend = overrides.backend;
    if (set("prompts-dir")) config.prompts_dir = overrides.prompts_dir;
    if (set("data-dir")) config.data_dir = overrides.data_dir;
    if (set("refine-threshold")) config.refine_threshold = overrides.refine_threshold;
    if (set("refine-max-iterations"))
        config.refine_max_iterations = overrides.refine_max_iterations;
    if (set("dependent")) config.independent_translation = false;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conlang: generate, translate, evaluate and browse "
                 "LLM-constructed languages"};
    app.require_subcommand(1);

    std::string config_path;
    conlang::RunConfig overrides;
    std::vector<std::string> set_flags;

    auto* generate = app.add_subcommand("generate", "bootstrap language sketches");
    add_common_flags(generate, config_path, overrides, set_flags);

    auto* translate = app.add_subcommand("translate", "translate sentences into a language");
    std::string sketch_path;
    std::string sentences_path = "data/test_sentences.txt";
    translate->add_option("--sketch", sketch_path, "path to a .sketch.json file")
        ->required();
    translate->add_option("--sentences", sentences_path, "sentences file, one per line");
    add_common_flags(translate, config_path, overrides, set_flags);

    auto* evaluate = app.add_subcommand("evaluate", "diversity and consistency metrics");
    std::vector<std::string> sketch_paths;
    std::vector<std::string> translations_paths;
    evaluate->add_option("--sketches", sketch_paths, "sketch files")->required();
    evaluate->add_option("--translations", translations_paths, "translation files");
    add_common_flags(evaluate, config_path, overrides, set_flags);

    auto* report = app.add_subcommand("report", "emit the static HTML site");
    std::string report_dir;
    report->add_option("--out", report_dir, "run output directory")->required();

    auto* baseline = app.add_subcommand("baseline", "single-prompt baseline generation");
    std::string baseline_sentences = "data/test_sentences.txt";
    baseline->add_option("--sentences", baseline_sentences, "sentences file");
    add_common_flags(baseline, config_path, overrides, set_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (report->parsed()) return conlang::cmd_report(report_dir);
        conlang::RunConfig config = resolve_config(config_path, overrides, set_flags);
        if (generate->parsed()) return conlang::cmd_generate(config);
        if (translate->parsed())
            return conlang::cmd_translate(config, sketch_path, sentences_path);
        if (evaluate->parsed())
            return conlang::cmd_evaluate(config, sketch_paths, translations_paths);
        if (baseline->parsed()) return conlang::cmd_baseline(config, baseline_sentences);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
