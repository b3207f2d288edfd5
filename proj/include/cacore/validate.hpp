#ifndef CACORE_VALIDATE_HPP
#define CACORE_VALIDATE_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cacore/metrics.hpp"

namespace cacore {

struct Violation {
    std::string where;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

// A metrics row as printed in a report: any cell may be absent (published
// tables do not always carry every statistic). Checks apply only where the
// operands are present, so literal table rows can be validated as-is.
struct MetricsRow {
    std::string label;
    std::optional<int> njp, nsa, njp_mfca, njp_1ca, tnca, ndca, m_a;

    static MetricsRow from(std::string_view label, const CoreMetrics& m) {
        MetricsRow row;
        row.label = label;
        row.njp = m.njp;
        row.nsa = m.nsa;
        row.njp_mfca = m.njp_mfca;
        row.njp_1ca = m.njp_1ca;
        row.tnca = m.tnca;
        row.ndca = m.ndca;
        row.m_a = m.m_a;
        return row;
    }
};

namespace validate_detail {

inline void require(std::vector<Violation>& out, const std::string& where, bool ok,
                    const std::string& message) {
    if (!ok) out.push_back({where, message});
}

}  // namespace validate_detail

// Internal consistency of one metrics row. These are exact identities of the
// rank-frequency construction, so a violation means the numbers cannot come
// from one coherent distribution.
inline std::vector<Violation> check_metrics_row(const MetricsRow& row) {
    using validate_detail::require;
    std::vector<Violation> v;
    auto nonneg = [&](const std::optional<int>& x, const char* name) {
        if (x) require(v, row.label, *x >= 0, std::string(name) + " is negative");
    };
    nonneg(row.njp, "NJP");
    nonneg(row.nsa, "NsA");
    nonneg(row.njp_mfca, "NJPmfCA");
    nonneg(row.njp_1ca, "NJP1CA");
    nonneg(row.tnca, "TNCA");
    nonneg(row.ndca, "NDCA");
    nonneg(row.m_a, "m_A");
    if (row.m_a && row.njp_mfca)
        require(v, row.label, *row.m_a <= *row.njp_mfca,
                "m_A = " + std::to_string(*row.m_a) + " exceeds NJPmfCA = " +
                    std::to_string(*row.njp_mfca));
    if (row.m_a && row.ndca)
        require(v, row.label, *row.m_a <= *row.ndca,
                "m_A = " + std::to_string(*row.m_a) + " exceeds NDCA = " +
                    std::to_string(*row.ndca));
    if (row.njp_1ca && row.ndca)
        require(v, row.label, *row.njp_1ca <= *row.ndca,
                "NJP1CA = " + std::to_string(*row.njp_1ca) + " exceeds NDCA = " +
                    std::to_string(*row.ndca));
    if (row.tnca && row.ndca)
        require(v, row.label, *row.tnca >= *row.ndca,
                "TNCA = " + std::to_string(*row.tnca) + " below NDCA = " +
                    std::to_string(*row.ndca));
    if (row.njp_mfca && row.njp)
        require(v, row.label, *row.njp_mfca <= *row.njp,
                "NJPmfCA = " + std::to_string(*row.njp_mfca) + " exceeds NJP = " +
                    std::to_string(*row.njp));
    if (row.njp_mfca && row.tnca)
        require(v, row.label, *row.njp_mfca <= *row.tnca,
                "NJPmfCA = " + std::to_string(*row.njp_mfca) + " exceeds TNCA = " +
                    std::to_string(*row.tnca));
    return v;
}

// A per-category publication row must partition its total.
inline std::vector<Violation> check_category_row(std::string_view label,
                                                 const CategoryTable& table) {
    std::vector<Violation> v;
    int sum = table.parts_sum();
    validate_detail::require(v, std::string(label), sum == table.np,
                             "category cells sum to " + std::to_string(sum) +
                                 " but NP = " + std::to_string(table.np));
    return v;
}

// Disjoint windows covering the span must add up to the total count.
inline std::vector<Violation> check_window_additivity(std::string_view label, int total,
                                                      std::span<const int> window_values) {
    std::vector<Violation> v;
    int sum = 0;
    for (int x : window_values) sum += x;
    validate_detail::require(v, std::string(label), sum == total,
                             "window values sum to " + std::to_string(sum) +
                                 " but the whole-span value is " + std::to_string(total));
    return v;
}

// The whole-span core can never fall below a sub-window core (J values only
// grow when the scope widens).
inline std::vector<Violation> check_core_monotonicity(std::string_view label, int total_m_a,
                                                      std::span<const int> window_m_a) {
    std::vector<Violation> v;
    for (size_t i = 0; i < window_m_a.size(); ++i) {
        validate_detail::require(
            v, std::string(label), total_m_a >= window_m_a[i],
            "whole-span m_A = " + std::to_string(total_m_a) + " below window #" +
                std::to_string(i + 1) + " m_A = " + std::to_string(window_m_a[i]));
    }
    return v;
}

// Structural invariants of a ranked distribution.
inline std::vector<Violation> check_distribution(const RankFrequencyDistribution& dist) {
    using validate_detail::require;
    std::vector<Violation> v;
    const std::string where = "distribution(" + dist.li.canonical_name + ")";
    for (size_t i = 0; i < dist.entries.size(); ++i) {
        const RankEntry& e = dist.entries[i];
        require(v, where, e.rank == static_cast<int>(i) + 1,
                "rank " + std::to_string(e.rank) + " at position " + std::to_string(i + 1));
        require(v, where, e.joint_pubs >= 1, "J < 1 at rank " + std::to_string(e.rank));
        if (i > 0)
            require(v, where, dist.entries[i - 1].joint_pubs >= e.joint_pubs,
                    "J increases at rank " + std::to_string(e.rank));
        require(v, where, e.coauthor.canonical_name != dist.li.canonical_name,
                "LI appears as own coauthor");
    }
    return v;
}

inline void append(std::vector<Violation>& into, std::vector<Violation> more) {
    into.insert(into.end(), std::make_move_iterator(more.begin()),
                std::make_move_iterator(more.end()));
}

}  // namespace cacore

#endif
