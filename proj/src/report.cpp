#include "conlang/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "conlang/refine.hpp"
#include "conlang/util.hpp"

namespace conlang {

namespace {

const char* kStyle = R"css(
body { font-family: Georgia, serif; margin: 2rem auto; max-width: 60rem; color: #222; }
h1, h2 { font-family: Helvetica, Arial, sans-serif; }
table { border-collapse: collapse; width: 100%; margin: 1rem 0; }
th, td { border: 1px solid #bbb; padding: 0.4rem 0.6rem; text-align: left; vertical-align: top; }
th { background: #f0f0f0; }
.block-header { font-weight: bold; margin-top: 0.8rem; }
.block-body { margin: 0.2rem 0; white-space: pre-wrap; }
.meta { color: #666; font-size: 0.9rem; }
.gloss { font-family: "Courier New", monospace; }
)css";

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string page_head(const std::string& title) {
    return "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
           "<title>" + html_escape(title) + "</title>\n<style>" + kStyle +
           "</style>\n</head>\n<body>\n";
}

std::string section_html(const Section& section) {
    std::string out = "<h2>" + html_escape(to_string(section.kind)) + "</h2>\n";
    if (section.blocks.empty()) out += "<p class=\"meta\">(empty)</p>\n";
    for (const TextBlock& b : section.blocks) {
        const char* cls = b.kind == BlockKind::header ? "block-header" : "block-body";
        out += "<div class=\"" + std::string(cls) + "\">" + html_escape(b.text) +
               "</div>\n";
    }
    return out;
}

std::string language_page(const LanguageReportInput& input) {
    const LanguageSketch& s = input.sketch;
    std::string out = page_head("Language " + s.id);
    out += "<p><a href=\"index.html\">&larr; all languages</a></p>\n";
    out += "<h1>" + html_escape(s.id) + "</h1>\n";
    out += "<p class=\"meta\">seed " + std::to_string(s.seed) + ", version " +
           std::to_string(s.version);
    if (!s.user_constraint.empty())
        out += "; constraint: " + html_escape(s.user_constraint);
    out += "</p>\n";

    for (SectionKind kind :
         {SectionKind::phonology, SectionKind::grammar, SectionKind::lexicon})
        out += section_html(s.section(kind));

    out += "<h2>translations</h2>\n";
    out += "<table>\n<tr><th>source</th><th>translation</th><th>gloss</th>"
           "<th>refine</th></tr>\n";
    for (const TranslationRecord& rec : input.records) {
        const RefineTrace& t = rec.refine_trace;
        std::string trace = std::to_string(t.iterations.size()) + " critique(s), final " +
                            std::to_string(t.final_score) + ", " +
                            to_string(t.terminated_by);
        out += "<tr><td>" + html_escape(rec.source) + "</td><td>" +
               html_escape(rec.translation) + "</td><td class=\"gloss\">" +
               html_escape(rec.gloss) + "</td><td class=\"meta\">" +
               html_escape(trace) + "</td></tr>\n";
    }
    out += "</table>\n";

    out += "<h2>provenance</h2>\n<table>\n"
           "<tr><th>stage</th><th>model</th><th>summary</th></tr>\n";
    for (const ProvenanceEntry& p : s.provenance) {
        out += "<tr><td>" + html_escape(p.stage) + "</td><td>" +
               html_escape(p.model_id) + "</td><td>" + html_escape(p.summary) +
               "</td></tr>\n";
    }
    out += "</table>\n</body>\n</html>\n";
    return out;
}

}  // namespace

std::string html_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void emit_report(const std::vector<LanguageReportInput>& languages,
                 const ReportMetricsSummary& metrics, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<const LanguageReportInput*> sorted;
    for (const auto& lang : languages) sorted.push_back(&lang);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        return a->sketch.id < b->sketch.id;
    });

    std::string index = page_head("Generated languages");
    index += "<h1>Generated languages</h1>\n";
    if (metrics.has_diversity || metrics.has_language_consistency ||
        metrics.has_translation_consistency) {
        index += "<h2>metrics</h2>\n<table>\n<tr><th>metric</th><th>value</th></tr>\n";
        if (metrics.has_diversity)
            index += "<tr><td>diversity (mean pairwise distance)</td><td>" +
                     fmt3(metrics.d_mean) + "</td></tr>\n";
        if (metrics.has_language_consistency)
            index += "<tr><td>language consistency</td><td>" +
                     fmt3(metrics.language_rate) + "</td></tr>\n";
        if (metrics.has_translation_consistency)
            index += "<tr><td>translation consistency</td><td>" +
                     fmt3(metrics.translation_rate) + "</td></tr>\n";
        index += "</table>\n";
    }
    index += "<table>\n<tr><th>language</th><th>seed</th><th>translations</th></tr>\n";
    for (const LanguageReportInput* lang : sorted) {
        std::string file = "lang_" + lang->sketch.id + ".html";
        index += "<tr><td><a href=\"" + file + "\">" + html_escape(lang->sketch.id) +
                 "</a></td><td>" + std::to_string(lang->sketch.seed) + "</td><td>" +
                 std::to_string(lang->records.size()) + "</td></tr>\n";
        atomic_write_file((std::filesystem::path(out_dir) / file).string(),
                          language_page(*lang));
    }
    index += "</table>\n</body>\n</html>\n";
    atomic_write_file((std::filesystem::path(out_dir) / "index.html").string(), index);
}

}  // namespace conlang
