#ifndef CACORE_REPORT_HPP
#define CACORE_REPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cacore/fitting.hpp"
#include "cacore/ingest.hpp"
#include "cacore/metrics.hpp"
#include "cacore/validate.hpp"
#include "cacore/windows.hpp"

namespace cacore {

namespace report_detail {

// Table floats carry 3 decimals, matching the precision the numbers are
// meaningful to.
inline std::string fmt3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

inline std::string fmtg(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::string pad(std::string s, size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

}  // namespace report_detail

// Everything the report prints for one category filter.
struct TypeBlock {
    CategoryFilter filter = CategoryFilter::all;
    LiAnalysis analysis;
    std::optional<PowerLawFit> power;      // at the requested range
    std::optional<ZipfMandelbrotFit> zm;   // same range
    std::optional<EffectReport> effects;   // against the whole-range trend
    std::string fit_note;                  // set when fits are unavailable
};

struct ReportOptions {
    RangeKind range_kind = RangeKind::whole;
    int explicit_r_max = 0;
    int explicit_j_max = 0;
    EffectThresholds thresholds;
    std::vector<YearWindow> windows;
    CategoryFilter window_filter = CategoryFilter::all;
};

struct ReportBundle {
    std::string li_display;
    CategoryTable categories;  // pre-merge partition
    TypeBlock journals, proceedings, total;
    std::optional<WindowReport> window_rows;
    CategoryFilter window_filter = CategoryFilter::all;
    std::vector<Violation> violations;  // self-check results; empty means clean
};

namespace report_detail {

inline TypeBlock build_block(const std::vector<PublicationRecord>& records, std::string_view li,
                             CategoryFilter filter, const AliasMap& aliases,
                             const ReportOptions& opts) {
    TypeBlock block;
    block.filter = filter;
    block.analysis = analyze_li(records, li, filter, std::nullopt, aliases);
    const RankFrequencyDistribution& dist = block.analysis.dist;
    try {
        FitRange range;
        switch (opts.range_kind) {
            case RangeKind::whole:
                range = select_range(dist, RangeKind::whole, block.analysis.metrics.m_a);
                break;
            case RangeKind::central:
                range = select_range(dist, RangeKind::central, block.analysis.metrics.m_a);
                break;
            case RangeKind::explicit_box:
                range = select_range(dist, opts.explicit_r_max, opts.explicit_j_max);
                break;
        }
        block.power = fit_power_law(dist, range);
        try {
            block.zm = fit_zipf_mandelbrot(dist, range);
        } catch (const InsufficientData& e) {
            block.fit_note = e.what();
        } catch (const FitFailure& e) {
            block.zm = e.best;
            block.fit_note = e.what();
        }
        // effect detection always compares against the whole-range trend
        PowerLawFit whole = block.power->range.kind == RangeKind::whole
                                ? *block.power
                                : fit_power_law(dist, select_range(dist, RangeKind::whole,
                                                                   block.analysis.metrics.m_a));
        block.effects = detect_effects(dist, whole, opts.thresholds);
    } catch (const InsufficientData& e) {
        block.fit_note = e.what();
    } catch (const DegenerateDesign& e) {
        block.fit_note = e.what();
    }
    return block;
}

}  // namespace report_detail

// Full analysis for one LI. Takes classified, deduped but NOT yet merged
// records: the partition table reports bc and e separately, everything else
// sees the merged corpus.
inline ReportBundle build_report(const std::vector<PublicationRecord>& unmerged_records,
                                 std::string_view li, const AliasMap& aliases = {},
                                 const ReportOptions& opts = {}) {
    ReportBundle bundle;
    bundle.li_display = canonicalize(li, aliases).canonical_name;
    bundle.categories = category_table(unmerged_records, li, aliases);
    std::vector<PublicationRecord> records = merge_proceedings(unmerged_records);
    bundle.journals =
        report_detail::build_block(records, li, CategoryFilter::journals, aliases, opts);
    bundle.proceedings =
        report_detail::build_block(records, li, CategoryFilter::proceedings, aliases, opts);
    bundle.total = report_detail::build_block(records, li, CategoryFilter::all, aliases, opts);
    bundle.window_filter = opts.window_filter;
    if (!opts.windows.empty())
        bundle.window_rows = window_report(records, li, opts.window_filter, opts.windows, aliases);

    // self-checks: every table cell must come from one coherent distribution
    for (const TypeBlock* block : {&bundle.journals, &bundle.proceedings, &bundle.total}) {
        std::string label = "metrics(" + std::string(filter_name(block->filter)) + ")";
        append(bundle.violations, check_distribution(block->analysis.dist));
        append(bundle.violations,
               check_metrics_row(MetricsRow::from(label, block->analysis.metrics)));
    }
    append(bundle.violations, check_category_row("category partition", bundle.categories));
    if (bundle.window_rows) {
        std::vector<int> window_njp, window_m_a;
        for (const WindowRow& row : bundle.window_rows->rows) {
            window_njp.push_back(row.metrics.njp);
            window_m_a.push_back(row.metrics.m_a);
        }
        // records outside every window keep additivity exact
        LiAnalysis total = analyze_li(records, li, bundle.window_filter, std::nullopt, aliases);
        int outside = total.metrics.njp;
        for (int x : window_njp) outside -= x;
        if (outside < 0)
            bundle.violations.push_back({"windows", "window NJP values exceed the whole span"});
        append(bundle.violations,
               check_core_monotonicity("windows", bundle.window_rows->total.metrics.m_a,
                                       window_m_a));
    }
    return bundle;
}

// Plot series: whitespace-separated `r J fit_powerlaw fit_zm` columns with a
// header naming the LI, filter and range; unavailable fits print "nan".
inline std::string emit_plot_data(const RankFrequencyDistribution& dist,
                                  const std::optional<PowerLawFit>& power,
                                  const std::optional<ZipfMandelbrotFit>& zm) {
    using report_detail::fmtg;
    std::ostringstream out;
    std::string range = power ? power->range.label() : std::string("none");
    out << "# li=\"" << dist.li.canonical_name << "\" filter=" << filter_name(dist.category_filter)
        << " range=" << range << "\n";
    out << "# r J fit_powerlaw fit_zm\n";
    for (const RankEntry& e : dist.entries) {
        double r = e.rank;
        out << e.rank << ' ' << e.joint_pubs << ' '
            << (power ? fmtg(power->predict(r)) : "nan") << ' '
            << (zm ? fmtg(zm->predict(r)) : "nan") << '\n';
    }
    return out.str();
}

// Text rendering of the whole bundle, deterministic for identical inputs.
inline std::string render_report(const ReportBundle& bundle) {
    using report_detail::fmt3;
    using report_detail::pad;
    std::ostringstream out;
    out << "coauthor core report\n";
    out << "LI: " << bundle.li_display << "\n\n";

    const CategoryTable& c = bundle.categories;
    out << "publication partition (before bc+e merge)\n";
    out << "    NP  NJPj NsAPj  NJPp NsAPp NJPbc NsAPbc  NJPe NsAPe\n";
    char row[160];
    std::snprintf(row, sizeof row, "%6d %5d %5d %5d %5d %5d %6d %5d %5d\n", c.np, c.njp_j,
                  c.nsap_j, c.njp_p, c.nsap_p, c.njp_bc, c.nsap_bc, c.njp_e, c.nsap_e);
    out << row << '\n';

    out << "coauthor summary (after merge)\n";
    out << pad("", 10) << pad("NJPj", 10) << pad("NJPp", 10) << pad("TNJP", 10) << '\n';
    auto cell_year = [](const std::optional<int>& y) {
        return y ? std::to_string(*y) : std::string("-");
    };
    const TypeBlock* blocks[3] = {&bundle.journals, &bundle.proceedings, &bundle.total};
    auto emit_row = [&](std::string_view name, auto getter) {
        out << pad(std::string(name), 10);
        for (const TypeBlock* b : blocks) out << pad(getter(*b), 10);
        out << '\n';
    };
    emit_row("oldest P", [&](const TypeBlock& b) { return cell_year(b.analysis.oldest_year); });
    emit_row("latest P", [&](const TypeBlock& b) { return cell_year(b.analysis.latest_year); });
    emit_row("NJP", [](const TypeBlock& b) { return std::to_string(b.analysis.metrics.njp); });
    emit_row("NsA", [](const TypeBlock& b) { return std::to_string(b.analysis.metrics.nsa); });
    emit_row("NJPmfCA",
             [](const TypeBlock& b) { return std::to_string(b.analysis.metrics.njp_mfca); });
    emit_row("NJP1CA",
             [](const TypeBlock& b) { return std::to_string(b.analysis.metrics.njp_1ca); });
    emit_row("TNCA", [](const TypeBlock& b) { return std::to_string(b.analysis.metrics.tnca); });
    emit_row("NDCA", [](const TypeBlock& b) { return std::to_string(b.analysis.metrics.ndca); });
    emit_row("alpha", [&](const TypeBlock& b) {
        return b.power ? fmt3(b.power->alpha) : std::string("-");
    });
    emit_row("R^2", [&](const TypeBlock& b) {
        return b.power ? fmt3(b.power->r_squared) : std::string("-");
    });
    emit_row("m_A", [](const TypeBlock& b) { return std::to_string(b.analysis.metrics.m_a); });
    out << '\n';

    for (const TypeBlock* b : blocks) {
        std::string name(filter_name(b->filter));
        if (b->power) {
            out << "fit[" << name << "] power law: alpha=" << fmt3(b->power->alpha)
                << " prefactor=" << fmt3(b->power->prefactor)
                << " R^2=" << fmt3(b->power->r_squared) << " range=" << b->power->range.label()
                << " n=" << b->power->n_points;
            if (b->power->zero_variance) out << " (degenerate: zero variance)";
            out << '\n';
        }
        if (b->zm) {
            out << "fit[" << name << "] Zipf-Mandelbrot: J*=" << fmt3(b->zm->j_star)
                << " nu=" << fmt3(b->zm->nu) << " zeta=" << fmt3(b->zm->zeta)
                << " R^2=" << fmt3(b->zm->r_squared) << '\n';
        }
        if (b->effects) {
            const EffectReport& e = *b->effects;
            out << "effects[" << name << "]: king=" << (e.king ? "yes" : "no")
                << " (strength " << fmt3(e.king_strength) << ", heuristic)"
                << " queen=" << (e.queen ? "yes" : "no") << " (nu " << fmt3(e.queen_nu)
                << ", R^2 gain " << fmt3(e.queen_r2_gain) << ", heuristic)";
            if (!e.affected_ranks.empty()) {
                out << " affected ranks:";
                for (int r : e.affected_ranks) out << ' ' << r;
            }
            out << '\n';
        }
        if (!b->fit_note.empty()) out << "note[" << name << "]: " << b->fit_note << '\n';
    }
    out << '\n';

    if (bundle.window_rows) {
        out << "time regimes (category filter: " << filter_name(bundle.window_filter) << ")\n";
        std::vector<const WindowRow*> rows;
        for (const WindowRow& r : bundle.window_rows->rows) rows.push_back(&r);
        rows.push_back(&bundle.window_rows->total);
        out << pad("", 10);
        for (const WindowRow* r : rows) out << pad(r->label, 14);
        out << '\n';
        auto wrow = [&](std::string_view name, auto getter) {
            out << pad(std::string(name), 10);
            for (const WindowRow* r : rows) out << pad(getter(*r), 14);
            out << '\n';
        };
        wrow("NJP", [](const WindowRow& r) { return std::to_string(r.metrics.njp); });
        wrow("NJPmfCA", [](const WindowRow& r) { return std::to_string(r.metrics.njp_mfca); });
        wrow("NJP1CA", [](const WindowRow& r) { return std::to_string(r.metrics.njp_1ca); });
        wrow("NDCA", [](const WindowRow& r) { return std::to_string(r.metrics.ndca); });
        wrow("NsA", [](const WindowRow& r) { return std::to_string(r.metrics.nsa); });
        wrow("alpha", [&](const WindowRow& r) {
            return r.fit ? fmt3(r.fit->alpha) : std::string("-");
        });
        wrow("R^2", [&](const WindowRow& r) {
            return r.fit ? fmt3(r.fit->r_squared) : std::string("-");
        });
        wrow("m_A", [](const WindowRow& r) { return std::to_string(r.metrics.m_a); });
        out << '\n';
    }

    if (bundle.violations.empty()) {
        out << "consistency self-check: ok\n";
    } else {
        out << "consistency self-check: " << bundle.violations.size() << " violation(s)\n";
        for (const Violation& v : bundle.violations)
            out << "  " << v.where << ": " << v.message << '\n';
    }
    return out.str();
}

// Write report.txt plus one plot-data file per filter into `dir`.
inline std::vector<std::filesystem::path> write_bundle(const std::filesystem::path& dir,
                                                       const ReportBundle& bundle) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto write_file = [&](const std::filesystem::path& name, const std::string& content) {
        std::filesystem::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot write " + p.string());
        out << content;
        written.push_back(p);
    };
    write_file("report.txt", render_report(bundle));
    const TypeBlock* blocks[3] = {&bundle.journals, &bundle.proceedings, &bundle.total};
    const char* names[3] = {"plot_j.dat", "plot_p.dat", "plot_all.dat"};
    for (int i = 0; i < 3; ++i)
        write_file(names[i],
                   emit_plot_data(blocks[i]->analysis.dist, blocks[i]->power, blocks[i]->zm));
    return written;
}

}  // namespace cacore

#endif
