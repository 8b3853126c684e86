#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "conlang/gateway.hpp"

namespace conlang {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string generator_model_id = "gpt-4o";
    std::string judge_model_id = "o3";
    uint64_t seed = 0;
    std::string user_constraint;
    int refine_threshold = 9;
    int refine_max_iterations = 10;
    std::string gateway_mode = "live";  // live | record | replay
    std::string fixtures_path;
    std::string output_dir = "out";
    int n_languages = 1;
    bool independent_translation = true;
    int jobs = 1;
    int lexicon_size = 50;
    std::string backend = "http";  // http | canned (offline stand-in)
    std::string prompts_dir = "prompts";
    std::string data_dir = "data";
};

RunConfig load_run_config(const std::string& path);
/// Throws ConfigError on invalid combinations; warns (stderr) when the judge
/// and generator model coincide.
void validate_config(const RunConfig& config);

/// Builds a gateway for the configured mode and backend.
Gateway make_gateway(const RunConfig& config);

std::vector<std::string> read_sentences_file(const std::string& path);

/// Expected sha256 of data/wals_features.json; cmd_evaluate refuses to run on
/// a mismatching feature file.
inline constexpr const char* kWalsFeaturesSha256 =
    "794de92e4b0da04ecd4447e3c84f070052ab335171d27906e065ddab59eff44b";

// Each command returns a process exit code (0 iff all requested units succeeded).
int cmd_generate(const RunConfig& config);
int cmd_translate(const RunConfig& config, const std::string& sketch_path,
                  const std::string& sentences_path);
int cmd_evaluate(const RunConfig& config,
                 const std::vector<std::string>& sketch_paths,
                 const std::vector<std::string>& translations_paths);
int cmd_report(const std::string& output_dir);
int cmd_baseline(const RunConfig& config, const std::string& sentences_path);

}  // namespace conlang
