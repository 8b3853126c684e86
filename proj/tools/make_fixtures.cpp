// Regenerates the shipped demo fixture set by running the full pipeline in
// record mode against the offline canned backend. Usage:
//   make_fixtures <repo_root> [n_languages]
#include <cstdio>
#include <filesystem>
#include <string>

#include "conlang/commands.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <repo_root> [n_languages]\n", argv[0]);
        return 2;
    }
    fs::path root = argv[1];
    int n = argc > 2 ? std::atoi(argv[2]) : 2;

    conlang::RunConfig config;
    config.gateway_mode = "record";
    config.backend = "canned";
    config.fixtures_path = (root / "fixtures" / "demo.fixtures.jsonl").string();
    config.prompts_dir = (root / "prompts").string();
    config.data_dir = (root / "data").string();
    config.output_dir = (fs::temp_directory_path() / "conlang_make_fixtures").string();
    config.seed = 1000;
    config.n_languages = n;
    config.generator_model_id = "canned-generator";
    config.judge_model_id = "canned-judge";

    fs::remove_all(config.output_dir);
    fs::remove(config.fixtures_path);
    fs::create_directories(root / "fixtures");

    try {
        if (conlang::cmd_generate(config) != 0) return 1;
        std::vector<std::string> sketches;
        std::vector<std::string> translations;
        std::string sentences = (root / "data" / "test_sentences.txt").string();
        for (const auto& entry : fs::directory_iterator(config.output_dir)) {
            std::string name = entry.path().filename().string();
            if (name.find(".sketch.json") == std::string::npos) continue;
            sketches.push_back(entry.path().string());
        }
        std::sort(sketches.begin(), sketches.end());
        for (const std::string& sketch : sketches) {
            if (conlang::cmd_translate(config, sketch, sentences) != 0) return 1;
            std::string id = fs::path(sketch).filename().string();
            id = id.substr(0, id.find(".sketch.json"));
            translations.push_back(
                (fs::path(config.output_dir) / (id + ".translations.jsonl")).string());
        }
        if (conlang::cmd_evaluate(config, sketches, translations) != 0) return 1;
        std::printf("fixtures written to %s\n", config.fixtures_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
