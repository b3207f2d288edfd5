#ifndef CACORE_WINDOWS_HPP
#define CACORE_WINDOWS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cacore/authors.hpp"
#include "cacore/fitting.hpp"
#include "cacore/metrics.hpp"
#include "cacore/record.hpp"
#include "cacore/text.hpp"

namespace cacore {

// CLI window syntax: "1966:1999", open-ended "2000:" (end becomes 9999) or
// ":1999" (start becomes 1900).
inline YearWindow parse_window(std::string_view text) {
    size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        throw UsageError("window must be START:END, got '" + std::string(text) + "'");
    std::string start_s = trim(text.substr(0, colon));
    std::string end_s = trim(text.substr(colon + 1));
    YearWindow w;
    try {
        w.start = start_s.empty() ? kMinYear : std::stoi(start_s);
        w.end = end_s.empty() ? kOpenEndYear : std::stoi(end_s);
    } catch (const std::exception&) {
        throw UsageError("window years must be integers, got '" + std::string(text) + "'");
    }
    if (w.start > w.end)
        throw UsageError("window start after end: '" + std::string(text) + "'");
    return w;
}

inline std::string window_label(const YearWindow& w) {
    std::string end = w.end >= kOpenEndYear ? "..." : std::to_string(w.end);
    return "[" + std::to_string(w.start) + "-" + end + "]";
}

struct WindowSplit {
    std::vector<std::pair<YearWindow, std::vector<PublicationRecord>>> assigned;
    std::vector<PublicationRecord> unassigned;
};

// Assign each record to the window containing its year; order preserved
// inside each bucket. Overlapping windows are a usage error.
inline WindowSplit split_by_windows(const std::vector<PublicationRecord>& records,
                                    const std::vector<YearWindow>& windows) {
    for (size_t i = 0; i < windows.size(); ++i) {
        for (size_t j = i + 1; j < windows.size(); ++j) {
            if (windows[i].overlaps(windows[j]))
                throw UsageError("windows " + window_label(windows[i]) + " and " +
                                 window_label(windows[j]) + " overlap");
        }
    }
    WindowSplit split;
    split.assigned.reserve(windows.size());
    for (const YearWindow& w : windows) split.assigned.emplace_back(w, std::vector<PublicationRecord>{});
    for (const auto& rec : records) {
        bool placed = false;
        for (auto& [w, bucket] : split.assigned) {
            if (w.contains(rec.year)) {
                bucket.push_back(rec);
                placed = true;
                break;
            }
        }
        if (!placed) split.unassigned.push_back(rec);
    }
    return split;
}

// One row of the time-regime table: metrics plus a whole-range power-law fit
// where at least 3 ranked coauthors exist; otherwise the fit is unavailable
// but the counts still report.
struct WindowRow {
    std::string label;
    std::optional<YearWindow> window;  // empty for the whole-span row
    CoreMetrics metrics;
    std::optional<PowerLawFit> fit;
};

struct WindowReport {
    std::vector<WindowRow> rows;  // per window, in input order
    WindowRow total;              // whole span (no window filter)
};

namespace windows_detail {

inline WindowRow make_row(const std::vector<PublicationRecord>& records, std::string_view li,
                          CategoryFilter filter, const std::optional<YearWindow>& window,
                          const AliasMap& aliases, std::string label) {
    WindowRow row;
    row.label = std::move(label);
    row.window = window;
    LiAnalysis analysis = analyze_li(records, li, filter, window, aliases);
    row.metrics = analysis.metrics;
    try {
        FitRange range = select_range(analysis.dist, RangeKind::whole, row.metrics.m_a);
        row.fit = fit_power_law(analysis.dist, range);
    } catch (const InsufficientData&) {
        row.fit = std::nullopt;
    } catch (const DegenerateDesign&) {
        row.fit = std::nullopt;
    }
    return row;
}

}  // namespace windows_detail

inline WindowReport window_report(const std::vector<PublicationRecord>& records,
                                  std::string_view li, CategoryFilter filter,
                                  const std::vector<YearWindow>& windows,
                                  const AliasMap& aliases = {}) {
    for (size_t i = 0; i < windows.size(); ++i) {
        for (size_t j = i + 1; j < windows.size(); ++j) {
            if (windows[i].overlaps(windows[j]))
                throw UsageError("windows " + window_label(windows[i]) + " and " +
                                 window_label(windows[j]) + " overlap");
        }
    }
    WindowReport report;
    for (const YearWindow& w : windows)
        report.rows.push_back(
            windows_detail::make_row(records, li, filter, w, aliases, window_label(w)));
    report.total =
        windows_detail::make_row(records, li, filter, std::nullopt, aliases, "total");
    return report;
}

}  // namespace cacore

#endif
