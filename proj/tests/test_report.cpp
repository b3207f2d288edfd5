#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "cacore/report.hpp"
#include "cacore/synth.hpp"

using namespace cacore;

namespace {

PublicationRecord pub(std::string id, int year, std::vector<std::string> authors,
                      Category cat = Category::journal) {
    PublicationRecord r;
    r.id = std::move(id);
    r.year = year;
    r.venue = "V";
    r.raw_authors = std::move(authors);
    r.category = cat;
    return r;
}

// 840 = lcm(1..8), so J = 840/r is integral for consecutive ranks 1..8 and
// the points sit exactly on a power law with alpha = 1.
RankFrequencyDistribution exact_dist() {
    RankFrequencyDistribution d;
    d.li = {"X. Li", 1};
    for (int r = 1; r <= 8; ++r)
        d.entries.push_back({r, {"C. A" + std::to_string(r), 1}, 840 / r});
    return d;
}

}  // namespace

TEST_CASE("emit_plot_data: header plus one line per rank") {
    auto d = exact_dist();
    d.entries.resize(3);
    FitRange range{RangeKind::whole, 3, 840, 0};
    auto fit = fit_power_law(d, range);
    std::string text = emit_plot_data(d, fit, std::nullopt);
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 5);  // 2 header lines + 3 data lines
    CHECK(text.find("# li=\"X. Li\"") == 0);
    CHECK(text.find("nan") != std::string::npos);  // missing ZM column
}

TEST_CASE("emit_plot_data: empty distribution emits the header only") {
    RankFrequencyDistribution d;
    d.li = {"X. Li", 1};
    std::string text = emit_plot_data(d, std::nullopt, std::nullopt);
    CHECK(text.find("# li=") == 0);
    CHECK(text.find("range=none") != std::string::npos);
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 2);
}

TEST_CASE("emit_plot_data: exact-model data reproduces J in the fit column") {
    auto d = exact_dist();
    FitRange range{RangeKind::whole, 8, 840, 0};
    auto pl = fit_power_law(d, range);
    auto zm = fit_zipf_mandelbrot(d, range);
    std::string text = emit_plot_data(d, pl, zm);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);  // headers
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        double r, j, fit_pl, fit_zm;
        cells >> r >> j >> fit_pl >> fit_zm;
        CHECK(std::abs(fit_pl - j) / j <= 1e-6);
        CHECK(std::abs(fit_zm - j) / j <= 1e-6);
    }
}

TEST_CASE("build_report: self-checks pass and tables trace to the metrics") {
    std::vector<PublicationRecord> recs = {
        pub("1", 1999, {"X. Li", "A. Aa"}, Category::journal),
        pub("2", 2000, {"X. Li", "A. Aa", "B. Bb"}, Category::proceedings),
        pub("3", 2001, {"X. Li", "A. Aa"}, Category::book_chapter),
        pub("4", 2002, {"X. Li", "C. Cc"}, Category::encyclopedia),
        pub("5", 2003, {"X. Li"}, Category::journal),
        pub("6", 2004, {"X. Li", "B. Bb"}, Category::journal),
    };
    ReportOptions opts;
    opts.windows = {{1990, 2001}, {2002, 2012}};
    ReportBundle bundle = build_report(recs, "X. Li", {}, opts);

    CHECK(bundle.violations.empty());
    // partition table reports bc and e separately
    CHECK(bundle.categories.np == 6);
    CHECK(bundle.categories.njp_bc == 1);
    CHECK(bundle.categories.njp_e == 1);
    CHECK(bundle.categories.nsap_j == 1);
    // after the merge the proceedings block sees p + bc + e
    CHECK(bundle.proceedings.analysis.metrics.njp == 3);
    CHECK(bundle.journals.analysis.metrics.njp == 2);
    CHECK(bundle.total.analysis.metrics.njp == 5);
    // window rows partition NJP
    REQUIRE(bundle.window_rows.has_value());
    int sum = 0;
    for (const WindowRow& row : bundle.window_rows->rows) sum += row.metrics.njp;
    CHECK(sum == bundle.window_rows->total.metrics.njp);
}

TEST_CASE("render_report is deterministic and self-consistent") {
    SynthParams params;
    params.n_papers = 150;
    params.attach_prob = 0.7;
    params.proceedings_fraction = 0.35;
    params.seed = 777;
    auto corpus = generate(params);
    ReportOptions opts;
    opts.windows = {{1980, 1999}, {2000, 2012}};
    ReportBundle a = build_report(corpus, params.li_name, {}, opts);
    ReportBundle b = build_report(corpus, params.li_name, {}, opts);
    CHECK(render_report(a) == render_report(b));
    CHECK(a.violations.empty());
    CHECK(render_report(a).find("consistency self-check: ok") != std::string::npos);
}

TEST_CASE("write_bundle produces the report and plot files") {
    SynthParams params;
    params.n_papers = 80;
    params.seed = 11;
    auto corpus = generate(params);
    ReportBundle bundle = build_report(corpus, params.li_name);
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "cacore_test_bundle";
    std::filesystem::remove_all(dir);
    auto written = write_bundle(dir, bundle);
    REQUIRE(written.size() == 4);
    for (const auto& p : written) {
        CHECK(std::filesystem::exists(p));
        CHECK(std::filesystem::file_size(p) > 0);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("metrics row validation feeds on computed and literal rows") {
    CoreMetrics good{2, 3, 0, 3, 1, 6, 3};
    CHECK(check_metrics_row(MetricsRow::from("good", good)).empty());
    MetricsRow bad;
    bad.label = "bad";
    bad.m_a = 10;
    bad.njp_mfca = 4;  // core cannot exceed the top J
    CHECK(check_metrics_row(bad).size() == 1);
}
