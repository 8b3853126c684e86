#pragma once

#include <string>
#include <vector>

#include "conlang/sketch.hpp"
#include "conlang/translator_types.hpp"

namespace conlang {

struct LanguageReportInput {
    LanguageSketch sketch;
    std::vector<TranslationRecord> records;  // may be empty
};

struct ReportMetricsSummary {
    bool has_diversity = false;
    double d_mean = 0.0;
    bool has_language_consistency = false;
    double language_rate = 0.0;
    bool has_translation_consistency = false;
    double translation_rate = 0.0;
};

std::string html_escape(const std::string& text);

/// Emits a dependency-free static site: index.html plus one page per
/// language. Deterministic output for identical inputs (languages sorted by id,
/// no timestamps).
void emit_report(const std::vector<LanguageReportInput>& languages,
                 const ReportMetricsSummary& metrics, const std::string& out_dir);

}  // namespace conlang
