#ifndef CACORE_METRICS_HPP
#define CACORE_METRICS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cacore/authors.hpp"
#include "cacore/record.hpp"

namespace cacore {

// Which publication categories enter a distribution. Journals and
// proceedings are the two lists the analysis contrasts; `all` is their sum.
enum class CategoryFilter { all, journals, proceedings };

inline std::string_view filter_name(CategoryFilter f) {
    switch (f) {
        case CategoryFilter::all: return "all";
        case CategoryFilter::journals: return "j";
        case CategoryFilter::proceedings: return "p";
    }
    return "?";
}

inline std::optional<CategoryFilter> parse_filter(std::string_view tag) {
    if (tag == "all" || tag == "total" || tag == "T") return CategoryFilter::all;
    if (tag == "j") return CategoryFilter::journals;
    if (tag == "p") return CategoryFilter::proceedings;
    return std::nullopt;
}

inline bool filter_matches(CategoryFilter f, Category c) {
    switch (f) {
        case CategoryFilter::all: return true;
        case CategoryFilter::journals: return c == Category::journal;
        case CategoryFilter::proceedings: return c == Category::proceedings;
    }
    return false;
}

struct RankEntry {
    int rank = 0;
    CanonicalAuthor coauthor;
    int joint_pubs = 0;  // J(r)

    friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

// The (r, J) histogram of joint publications per coauthor, ranked by
// decreasing J; ties broken by canonical name so output is reproducible.
struct RankFrequencyDistribution {
    CanonicalAuthor li;
    CategoryFilter category_filter = CategoryFilter::all;
    std::optional<YearWindow> window;
    std::vector<RankEntry> entries;

    int r_max() const { return static_cast<int>(entries.size()); }
    bool empty() const { return entries.empty(); }
    int j_at(int rank) const { return entries.at(static_cast<size_t>(rank - 1)).joint_pubs; }
};

// The notation block reported alongside m_A.
struct CoreMetrics {
    int m_a = 0;
    int njp = 0;       // joint publications in scope
    int nsa = 0;       // single-author publications in scope
    int njp_mfca = 0;  // J(1): joint pubs with the most frequent coauthor
    int njp_1ca = 0;   // coauthors with exactly one joint publication
    int tnca = 0;      // total coauthorships, sum of J
    int ndca = 0;      // distinct coauthors, r_max

    friend bool operator==(const CoreMetrics&, const CoreMetrics&) = default;
};

namespace metrics_detail {

struct ScopePass {
    std::map<std::string, int> joint_counts;           // canonical coauthor -> J
    std::map<std::string, std::set<std::string>> variants;  // canonical -> raw normalized forms
    int joint_pubs = 0;
    int single_author_pubs = 0;
    std::optional<int> oldest_year, latest_year;
};

// One pass over the records that involve the LI. A record counts as
// single-author when its distinct canonical author set is just the LI.
inline ScopePass scan_scope(const std::vector<PublicationRecord>& records,
                            const std::string& li_canonical, CategoryFilter filter,
                            const std::optional<YearWindow>& window, const AliasMap& aliases) {
    ScopePass pass;
    for (const auto& rec : records) {
        if (!filter_matches(filter, rec.effective_category())) continue;
        if (window && !window->contains(rec.year)) continue;
        std::map<std::string, std::set<std::string>> authors;  // canonical -> raw variants
        for (const std::string& raw : rec.raw_authors) {
            std::string normalized = normalize_name(raw);
            CanonicalAuthor canon = canonicalize(raw, aliases);
            authors[canon.canonical_name].insert(normalized);
        }
        if (!authors.count(li_canonical)) continue;
        if (!pass.oldest_year || rec.year < *pass.oldest_year) pass.oldest_year = rec.year;
        if (!pass.latest_year || rec.year > *pass.latest_year) pass.latest_year = rec.year;
        if (authors.size() == 1) {
            ++pass.single_author_pubs;
            continue;
        }
        ++pass.joint_pubs;
        for (auto& [canonical, raws] : authors) {
            if (canonical == li_canonical) continue;
            ++pass.joint_counts[canonical];
            pass.variants[canonical].insert(raws.begin(), raws.end());
        }
    }
    return pass;
}

}  // namespace metrics_detail

// Rank the LI's coauthors by decreasing number of joint publications.
// Single-author records are excluded here (surfaced as NsA in the summary).
// An LI with no matching records yields an empty distribution, not an error.
inline RankFrequencyDistribution rank_distribution(
    const std::vector<PublicationRecord>& records, std::string_view li,
    CategoryFilter filter = CategoryFilter::all,
    const std::optional<YearWindow>& window = std::nullopt, const AliasMap& aliases = {}) {
    CanonicalAuthor li_canon = canonicalize(li, aliases);
    RankFrequencyDistribution dist;
    dist.li = li_canon;
    dist.category_filter = filter;
    dist.window = window;

    metrics_detail::ScopePass pass =
        metrics_detail::scan_scope(records, li_canon.canonical_name, filter, window, aliases);

    std::vector<RankEntry> entries;
    entries.reserve(pass.joint_counts.size());
    for (const auto& [name, count] : pass.joint_counts) {
        int nvariants = static_cast<int>(pass.variants[name].size());
        entries.push_back({0, CanonicalAuthor{name, std::max(1, nvariants)}, count});
    }
    std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.joint_pubs != b.joint_pubs) return a.joint_pubs > b.joint_pubs;
        return a.coauthor.canonical_name < b.coauthor.canonical_name;
    });
    for (size_t i = 0; i < entries.size(); ++i) entries[i].rank = static_cast<int>(i) + 1;
    dist.entries = std::move(entries);
    return dist;
}

// m_A: the largest rank r with J(r) >= r (Hirsch-style cut of the ranked
// J-sequence); 0 for the empty distribution.
inline int core_index(const RankFrequencyDistribution& dist) {
    for (int r = dist.r_max(); r >= 1; --r) {
        if (dist.j_at(r) >= r) return r;
    }
    return 0;
}

// Notation-block statistics for a distribution plus its scope counts.
inline CoreMetrics summary_stats(const RankFrequencyDistribution& dist, int joint_pubs,
                                 int single_author_pubs) {
    CoreMetrics m;
    m.njp = joint_pubs;
    m.nsa = single_author_pubs;
    m.ndca = dist.r_max();
    m.njp_mfca = dist.empty() ? 0 : dist.entries.front().joint_pubs;
    for (const RankEntry& e : dist.entries) {
        m.tnca += e.joint_pubs;
        if (e.joint_pubs == 1) ++m.njp_1ca;
    }
    m.m_a = core_index(dist);
    return m;
}

// Distribution and summary computed together from one scope scan.
struct LiAnalysis {
    RankFrequencyDistribution dist;
    CoreMetrics metrics;
    std::optional<int> oldest_year, latest_year;
};

inline LiAnalysis analyze_li(const std::vector<PublicationRecord>& records, std::string_view li,
                             CategoryFilter filter = CategoryFilter::all,
                             const std::optional<YearWindow>& window = std::nullopt,
                             const AliasMap& aliases = {}) {
    LiAnalysis out;
    out.dist = rank_distribution(records, li, filter, window, aliases);
    CanonicalAuthor li_canon = canonicalize(li, aliases);
    metrics_detail::ScopePass pass =
        metrics_detail::scan_scope(records, li_canon.canonical_name, filter, window, aliases);
    out.metrics = summary_stats(out.dist, pass.joint_pubs, pass.single_author_pubs);
    out.oldest_year = pass.oldest_year;
    out.latest_year = pass.latest_year;
    return out;
}

// Per-category partition of the LI's records, before the bc+e merge:
// joint vs single-author counts for j, p, bc, e. NP is the row total.
struct CategoryTable {
    int np = 0;
    int njp_j = 0, nsap_j = 0;
    int njp_p = 0, nsap_p = 0;
    int njp_bc = 0, nsap_bc = 0;
    int njp_e = 0, nsap_e = 0;

    int parts_sum() const {
        return njp_j + nsap_j + njp_p + nsap_p + njp_bc + nsap_bc + njp_e + nsap_e;
    }
    friend bool operator==(const CategoryTable&, const CategoryTable&) = default;
};

inline CategoryTable category_table(const std::vector<PublicationRecord>& records,
                                    std::string_view li, const AliasMap& aliases = {}) {
    CanonicalAuthor li_canon = canonicalize(li, aliases);
    CategoryTable t;
    for (const auto& rec : records) {
        std::set<std::string> authors;
        for (const std::string& raw : rec.raw_authors)
            authors.insert(canonicalize(raw, aliases).canonical_name);
        if (!authors.count(li_canon.canonical_name)) continue;
        bool joint = authors.size() > 1;
        ++t.np;
        switch (rec.effective_category()) {
            case Category::journal: (joint ? t.njp_j : t.nsap_j)++; break;
            case Category::proceedings: (joint ? t.njp_p : t.nsap_p)++; break;
            case Category::book_chapter: (joint ? t.njp_bc : t.nsap_bc)++; break;
            case Category::encyclopedia: (joint ? t.njp_e : t.nsap_e)++; break;
        }
    }
    return t;
}

}  // namespace cacore

#endif
