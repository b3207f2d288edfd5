#ifndef CACORE_CLI_HPP
#define CACORE_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cacore/authors.hpp"
#include "cacore/ingest.hpp"
#include "cacore/metrics.hpp"
#include "cacore/report.hpp"
#include "cacore/synth.hpp"
#include "cacore/windows.hpp"

namespace cacore::cli {

namespace cli_detail {

inline InputFormat resolve_format(const std::string& path, const std::string& format_flag) {
    if (!format_flag.empty()) {
        auto f = parse_format(format_flag);
        if (!f) throw UsageError("unknown format '" + format_flag + "'");
        return *f;
    }
    std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".jsonl" || ext == ".ndjson") return InputFormat::jsonl;
    if (ext == ".csv") return InputFormat::csv;
    if (ext == ".bib" || ext == ".bibtex") return InputFormat::bibtex;
    throw UsageError("cannot infer format of '" + path + "'; pass --format");
}

struct LoadedCorpus {
    std::vector<PublicationRecord> records;
    std::vector<ParseIssue> issues;  // with source file prefixes in messages
};

inline LoadedCorpus load_inputs(const std::vector<std::string>& inputs,
                                const std::string& format_flag) {
    if (inputs.empty()) throw UsageError("at least one --input is required");
    LoadedCorpus corpus;
    for (const std::string& path : inputs) {
        ParseResult result;
        if (path == "-") {
            if (format_flag.empty()) throw UsageError("--format is required when reading stdin");
            result = parse_records(std::cin, resolve_format("", format_flag));
        } else {
            InputFormat format = resolve_format(path, format_flag);
            std::ifstream in(path, std::ios::binary);
            if (!in) throw IoError("cannot open '" + path + "'");
            result = parse_records(in, format);
        }
        for (ParseIssue& issue : result.issues)
            corpus.issues.push_back(
                {issue.line, path + ":" + std::to_string(issue.line) + ": " + issue.message});
        for (auto& rec : result.records) corpus.records.push_back(std::move(rec));
    }
    for (ParseIssue& issue : validate_corpus(corpus.records))
        corpus.issues.push_back({0, "corpus: " + issue.message});
    return corpus;
}

inline AliasMap load_aliases(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open alias file '" + path + "'");
    return AliasMap::from_stream(in, path);
}

inline ClassificationRules load_rules(const std::string& path) {
    if (path.empty()) return ClassificationRules::defaults();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open rules file '" + path + "'");
    return ClassificationRules::from_stream(in, path).followed_by(
        ClassificationRules::defaults());
}

inline void print_issues(const std::vector<ParseIssue>& issues, std::ostream& err) {
    for (const ParseIssue& issue : issues) err << "error: " << issue.message << '\n';
}

// classify -> dedupe -> merge; the standard preparation before any analysis
inline std::vector<PublicationRecord> prepare(std::vector<PublicationRecord> records,
                                              const ClassificationRules& rules,
                                              const AliasMap& aliases, bool merge,
                                              std::vector<std::pair<std::string, std::string>>*
                                                  dropped = nullptr) {
    classify_all(records, rules);
    DedupeResult dd = dedupe(records, aliases);
    if (dropped) *dropped = dd.dropped;
    if (merge) return merge_proceedings(std::move(dd.kept));
    return std::move(dd.kept);
}

inline RangeKind parse_range_kind(const std::string& text, int& r_max, int& j_max) {
    if (text == "whole") return RangeKind::whole;
    if (text == "central") return RangeKind::central;
    size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("range must be whole|central|RMAX:JMAX, got '" + text + "'");
    try {
        r_max = std::stoi(text.substr(0, colon));
        j_max = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw UsageError("range box must be RMAX:JMAX integers, got '" + text + "'");
    }
    return RangeKind::explicit_box;
}

inline CoauthorSpec parse_coauthors(const std::string& text) {
    size_t colon = text.find(':');
    try {
        if (colon == std::string::npos) return CoauthorSpec::fixed(std::stoi(text));
        return CoauthorSpec::uniform(std::stoi(text.substr(0, colon)),
                                     std::stoi(text.substr(colon + 1)));
    } catch (const std::exception&) {
        throw UsageError("coauthors must be K or A:B, got '" + text + "'");
    }
}

inline std::string metrics_text(const CoreMetrics& m, const CategoryTable& table) {
    std::ostringstream out;
    out << "NJP " << m.njp << "\nNsA " << m.nsa << "\nNJPmfCA " << m.njp_mfca << "\nNJP1CA "
        << m.njp_1ca << "\nTNCA " << m.tnca << "\nNDCA " << m.ndca << "\nm_A " << m.m_a << '\n';
    out << "category partition: NP " << table.np << " | j " << table.njp_j << "+" << table.nsap_j
        << " | p " << table.njp_p << "+" << table.nsap_p << " | bc " << table.njp_bc << "+"
        << table.nsap_bc << " | e " << table.njp_e << "+" << table.nsap_e
        << " (joint+single per category)\n";
    return out.str();
}

}  // namespace cli_detail

// Exit codes: 0 success, 1 data/analysis error, 2 usage error.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    using namespace cli_detail;

    CLI::App app{"coauthor core analysis toolkit: rank-frequency law and m_A core index\n"
                 "from publication lists, split by publication type and time window"};
    app.require_subcommand(1);

    // shared option storage
    std::vector<std::string> inputs;
    std::string format_flag, aliases_path, rules_path, li, category = "all", range_text = "whole";
    std::vector<std::string> window_texts;
    double king_threshold = 2.0, queen_nu = 1.0, queen_delta = 0.02;
    std::string out_path;
    bool no_merge = false;

    auto add_corpus_opts = [&](CLI::App* cmd, bool need_li) {
        cmd->add_option("--input", inputs, "input file (repeatable); '-' reads stdin")
            ->required();
        cmd->add_option("--format", format_flag, "bibtex|jsonl|csv (default: by extension)");
        cmd->add_option("--aliases", aliases_path, "alias file: 'raw name -> canonical name'");
        cmd->add_option("--rules", rules_path, "classification rules file: 'PATTERN -> CATEGORY'");
        if (need_li) cmd->add_option("--li", li, "lead investigator name")->required();
    };

    CLI::App* ingest_cmd = app.add_subcommand(
        "ingest", "parse, classify, dedupe and emit a normalized JSONL corpus");
    add_corpus_opts(ingest_cmd, false);
    ingest_cmd->add_option("--out", out_path, "output JSONL file (default: stdout)");
    ingest_cmd->add_flag("--no-merge", no_merge, "keep bc/e categories instead of merging into p");

    CLI::App* suggest_cmd = app.add_subcommand(
        "suggest-aliases", "list author-name pairs that may be variants of one person");
    add_corpus_opts(suggest_cmd, false);
    int max_distance = 2;
    suggest_cmd->add_option("--max-distance", max_distance, "maximum surname edit distance");

    CLI::App* metrics_cmd =
        app.add_subcommand("metrics", "coauthor core metrics for one lead investigator");
    add_corpus_opts(metrics_cmd, true);
    metrics_cmd->add_option("--category", category, "j|p|all (default all)");
    std::vector<std::string> metrics_windows;
    metrics_cmd->add_option("--window", metrics_windows, "restrict to START:END (repeatable)");

    CLI::App* fit_cmd = app.add_subcommand("fit", "power-law and Zipf-Mandelbrot fits");
    add_corpus_opts(fit_cmd, true);
    fit_cmd->add_option("--category", category, "j|p|all (default all)");
    fit_cmd->add_option("--range", range_text, "whole|central|RMAX:JMAX (default whole)");
    fit_cmd->add_option("--king-threshold", king_threshold,
                        "observed/fitted J(1) ratio flagging a king (default 2.0)");
    fit_cmd->add_option("--queen-nu", queen_nu, "minimum fitted nu flagging a queen (default 1.0)");
    fit_cmd->add_option("--queen-delta", queen_delta,
                        "minimum R^2 gain of ZM over power law (default 0.02)");

    CLI::App* windows_cmd = app.add_subcommand("windows", "per-time-window metrics and fits");
    add_corpus_opts(windows_cmd, true);
    windows_cmd->add_option("--category", category, "j|p|all (default all)");
    windows_cmd->add_option("--window", window_texts, "START:END (repeatable, required)")
        ->required();

    CLI::App* synth_cmd = app.add_subcommand(
        "synth", "generate a seeded success-breeds-success corpus (JSONL)");
    std::uint64_t seed = 0;
    int papers = 100;
    double attach_prob = 0.5, proceedings_fraction = 0.0;
    std::string coauthors_text = "2", years_text = "1980:2012";
    synth_cmd->add_option("--seed", seed, "PRNG seed")->required();
    synth_cmd->add_option("--papers", papers, "number of papers (default 100)");
    synth_cmd->add_option("--attach-prob", attach_prob,
                          "preferential-attachment probability (default 0.5)");
    synth_cmd->add_option("--coauthors", coauthors_text,
                          "coauthor slots per paper: K or A:B (default 2)");
    synth_cmd->add_option("--proceedings-fraction", proceedings_fraction,
                          "fraction of proceedings papers (default 0)");
    synth_cmd->add_option("--years", years_text, "year span START:END (default 1980:2012)");
    synth_cmd->add_option("--out", out_path, "output JSONL file (default: stdout)");

    CLI::App* report_cmd = app.add_subcommand(
        "report", "full pipeline: tables, fits, effects and plot data files");
    add_corpus_opts(report_cmd, true);
    report_cmd->add_option("--category", category, "window-table filter j|p|all (default all)");
    report_cmd->add_option("--window", window_texts, "time regime START:END (repeatable)");
    report_cmd->add_option("--range", range_text, "whole|central|RMAX:JMAX (default whole)");
    report_cmd->add_option("--king-threshold", king_threshold,
                           "observed/fitted J(1) ratio flagging a king (default 2.0)");
    report_cmd->add_option("--queen-nu", queen_nu,
                           "minimum fitted nu flagging a queen (default 1.0)");
    report_cmd->add_option("--queen-delta", queen_delta,
                           "minimum R^2 gain of ZM over power law (default 0.02)");
    report_cmd->add_option("--out", out_path, "output directory (default '.')");

    std::vector<const char*> argv;
    argv.push_back("cacore");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            auto subs = app.get_subcommands();
            out << (subs.empty() ? app.help() : subs.front()->help());
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "usage error: " << e.what() << '\n';
            return 2;
        }

        if (synth_cmd->parsed()) {
            SynthParams params;
            params.seed = seed;
            params.n_papers = papers;
            params.attach_prob = attach_prob;
            params.proceedings_fraction = proceedings_fraction;
            params.coauthors_per_paper = parse_coauthors(coauthors_text);
            params.year_span = parse_window(years_text);
            if (params.year_span.end >= kOpenEndYear)
                throw UsageError("synth year span must be closed (START:END)");
            std::vector<PublicationRecord> corpus = generate(params);
            if (out_path.empty()) {
                write_jsonl(out, corpus);
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw IoError("cannot write '" + out_path + "'");
                write_jsonl(f, corpus);
            }
            err << "generated " << corpus.size() << " records (LI: " << params.li_name << ")\n";
            return 0;
        }

        LoadedCorpus corpus = load_inputs(inputs, format_flag);
        AliasMap aliases = load_aliases(aliases_path);
        ClassificationRules rules = load_rules(rules_path);
        print_issues(corpus.issues, err);

        if (ingest_cmd->parsed()) {
            std::vector<std::pair<std::string, std::string>> dropped;
            std::vector<PublicationRecord> prepared =
                prepare(std::move(corpus.records), rules, aliases, !no_merge, &dropped);
            for (const auto& [id, reason] : dropped)
                err << "dropped '" << id << "': " << reason << '\n';
            if (out_path.empty()) {
                write_jsonl(out, prepared);
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw IoError("cannot write '" + out_path + "'");
                write_jsonl(f, prepared);
            }
            err << "kept " << prepared.size() << " records, dropped " << dropped.size() << '\n';
            return corpus.issues.empty() ? 0 : 1;
        }

        if (suggest_cmd->parsed()) {
            std::set<std::string> names;
            for (const auto& rec : corpus.records)
                for (const std::string& a : rec.raw_authors)
                    names.insert(canonicalize(a, aliases).canonical_name);
            std::vector<std::string> list(names.begin(), names.end());
            for (const AliasSuggestion& s : suggest_aliases(list, max_distance))
                out << s.name_a << " -> " << s.name_b << "  # distance " << s.distance << '\n';
            return corpus.issues.empty() ? 0 : 1;
        }

        auto filter = parse_filter(category);
        if (!filter) throw UsageError("category must be j|p|all, got '" + category + "'");

        if (metrics_cmd->parsed()) {
            std::vector<PublicationRecord> unmerged =
                prepare(std::move(corpus.records), rules, aliases, false);
            std::optional<YearWindow> window;
            if (!metrics_windows.empty()) {
                if (metrics_windows.size() > 1)
                    throw UsageError("metrics accepts a single --window; use the windows "
                                     "subcommand for several");
                window = parse_window(metrics_windows.front());
            }
            CategoryTable table = category_table(unmerged, li, aliases);
            std::vector<PublicationRecord> prepared = merge_proceedings(std::move(unmerged));
            LiAnalysis analysis = analyze_li(prepared, li, *filter, window, aliases);
            out << "LI: " << analysis.dist.li.canonical_name
                << " (category " << filter_name(*filter) << ")\n";
            out << metrics_text(analysis.metrics, table);
            return corpus.issues.empty() ? 0 : 1;
        }

        if (fit_cmd->parsed()) {
            std::vector<PublicationRecord> prepared =
                prepare(std::move(corpus.records), rules, aliases, true);
            LiAnalysis analysis = analyze_li(prepared, li, *filter, std::nullopt, aliases);
            int r_max = 0, j_max = 0;
            RangeKind kind = parse_range_kind(range_text, r_max, j_max);
            FitRange range = kind == RangeKind::explicit_box
                                 ? select_range(analysis.dist, r_max, j_max)
                                 : select_range(analysis.dist, kind, analysis.metrics.m_a);
            PowerLawFit power = fit_power_law(analysis.dist, range);
            out << "power law: alpha=" << report_detail::fmt3(power.alpha)
                << " prefactor=" << report_detail::fmt3(power.prefactor)
                << " R^2=" << report_detail::fmt3(power.r_squared)
                << " range=" << range.label() << " n=" << power.n_points << '\n';
            try {
                ZipfMandelbrotFit zm = fit_zipf_mandelbrot(analysis.dist, range);
                out << "Zipf-Mandelbrot: J*=" << report_detail::fmt3(zm.j_star)
                    << " nu=" << report_detail::fmt3(zm.nu)
                    << " zeta=" << report_detail::fmt3(zm.zeta)
                    << " R^2=" << report_detail::fmt3(zm.r_squared) << '\n';
            } catch (const InsufficientData& e) {
                out << "Zipf-Mandelbrot: unavailable (" << e.what() << ")\n";
            }
            PowerLawFit whole =
                range.kind == RangeKind::whole
                    ? power
                    : fit_power_law(analysis.dist,
                                    select_range(analysis.dist, RangeKind::whole,
                                                 analysis.metrics.m_a));
            EffectThresholds thresholds{king_threshold, queen_delta, queen_nu};
            EffectReport effects = detect_effects(analysis.dist, whole, thresholds);
            out << "king (heuristic): " << (effects.king ? "yes" : "no") << " strength="
                << report_detail::fmt3(effects.king_strength) << '\n';
            out << "queen (heuristic): " << (effects.queen ? "yes" : "no") << " nu="
                << report_detail::fmt3(effects.queen_nu)
                << " R^2 gain=" << report_detail::fmt3(effects.queen_r2_gain) << '\n';
            return corpus.issues.empty() ? 0 : 1;
        }

        if (windows_cmd->parsed()) {
            std::vector<PublicationRecord> prepared =
                prepare(std::move(corpus.records), rules, aliases, true);
            std::vector<YearWindow> windows;
            for (const std::string& w : window_texts) windows.push_back(parse_window(w));
            // reuse the report renderer for the window table
            ReportBundle minimal;
            minimal.window_rows = window_report(prepared, li, *filter, windows, aliases);
            minimal.window_filter = *filter;
            out << "LI: " << canonicalize(li, aliases).canonical_name << '\n';
            std::string full = render_report(minimal);
            size_t pos = full.find("time regimes");
            out << (pos == std::string::npos ? full : full.substr(pos));
            return corpus.issues.empty() ? 0 : 1;
        }

        if (report_cmd->parsed()) {
            std::vector<std::pair<std::string, std::string>> dropped;
            std::vector<PublicationRecord> unmerged =
                prepare(std::move(corpus.records), rules, aliases, false, &dropped);
            ReportOptions opts;
            opts.range_kind = parse_range_kind(range_text, opts.explicit_r_max,
                                               opts.explicit_j_max);
            opts.thresholds = EffectThresholds{king_threshold, queen_delta, queen_nu};
            for (const std::string& w : window_texts) opts.windows.push_back(parse_window(w));
            opts.window_filter = *filter;
            ReportBundle bundle = build_report(unmerged, li, aliases, opts);
            std::filesystem::path dir = out_path.empty() ? "." : out_path;
            std::vector<std::filesystem::path> written = write_bundle(dir, bundle);
            out << render_report(bundle);
            for (const auto& [id, reason] : dropped)
                err << "dropped '" << id << "': " << reason << '\n';
            for (const auto& p : written) err << "wrote " << p.string() << '\n';
            return corpus.issues.empty() ? 0 : 1;
        }

        throw UsageError("no subcommand selected");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const InsufficientData& e) {
        err << "insufficient data: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace cacore::cli

#endif
