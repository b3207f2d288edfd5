#ifndef CACORE_SYNTH_HPP
#define CACORE_SYNTH_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "cacore/prng.hpp"
#include "cacore/record.hpp"

namespace cacore {

// Coauthor slots per paper: a fixed count or uniform over [lo, hi].
struct CoauthorSpec {
    int lo = 1;
    int hi = 1;

    static CoauthorSpec fixed(int k) { return {k, k}; }
    static CoauthorSpec uniform(int a, int b) { return {a, b}; }
};

struct SynthParams {
    int n_papers = 100;
    double attach_prob = 0.5;  // chance a slot goes to an existing coauthor
    CoauthorSpec coauthors_per_paper = CoauthorSpec::fixed(2);
    double proceedings_fraction = 0.0;
    YearWindow year_span{1980, 2012};
    std::uint64_t seed = 0;
    std::string li_name = "L. Investigator";
};

// Minimal success-breeds-success coauthorship process, used as the
// estimator-validation oracle. Sequentially, each coauthor slot of each
// paper is filled with probability `attach_prob` by an existing coauthor
// drawn proportionally to their current joint-publication count, otherwise
// by a brand-new author. Draw order per paper is fixed (year, category,
// slot count, then slots) and the PRNG is SplitMix64, so a given seed
// reproduces the corpus bit for bit.
inline std::vector<PublicationRecord> generate(const SynthParams& params) {
    if (params.n_papers < 1) throw UsageError("n_papers must be >= 1");
    if (params.attach_prob < 0 || params.attach_prob > 1)
        throw UsageError("attach_prob must be in [0, 1]");
    if (params.proceedings_fraction < 0 || params.proceedings_fraction > 1)
        throw UsageError("proceedings_fraction must be in [0, 1]");
    if (params.coauthors_per_paper.lo < 0 ||
        params.coauthors_per_paper.lo > params.coauthors_per_paper.hi)
        throw UsageError("coauthor count range must satisfy 0 <= lo <= hi");
    if (params.year_span.start > params.year_span.end ||
        params.year_span.start < kMinYear)
        throw UsageError("year span must lie within [1900, ...] with start <= end");

    SplitMix64 rng(params.seed);
    std::vector<std::string> pool;       // coauthor names, index-aligned with counts
    std::vector<std::int64_t> j_counts;  // joint publications so far per coauthor
    std::int64_t total_j = 0;

    char buf[32];
    std::vector<PublicationRecord> records;
    records.reserve(static_cast<size_t>(params.n_papers));
    const std::uint64_t span =
        static_cast<std::uint64_t>(params.year_span.end - params.year_span.start) + 1;

    for (int paper = 0; paper < params.n_papers; ++paper) {
        PublicationRecord rec;
        std::snprintf(buf, sizeof buf, "s%05d", paper + 1);
        rec.id = buf;
        rec.year = params.year_span.start + static_cast<int>(rng.next_below(span));
        bool proceedings = rng.next_double() < params.proceedings_fraction;
        rec.category = proceedings ? Category::proceedings : Category::journal;
        rec.venue = proceedings ? "Synthetic Proceedings" : "Synthetic Journal";

        int k = params.coauthors_per_paper.lo;
        if (params.coauthors_per_paper.hi > params.coauthors_per_paper.lo) {
            k += static_cast<int>(rng.next_below(static_cast<std::uint64_t>(
                params.coauthors_per_paper.hi - params.coauthors_per_paper.lo + 1)));
        }

        rec.raw_authors.push_back(params.li_name);
        std::vector<int> on_paper;  // pool indices already used by this paper
        for (int slot = 0; slot < k; ++slot) {
            bool preferential =
                !pool.empty() && rng.next_double() < params.attach_prob;
            int chosen = -1;
            if (preferential) {
                // weight by J among coauthors not yet on this paper
                std::int64_t eligible_weight = total_j;
                for (int idx : on_paper) eligible_weight -= j_counts[static_cast<size_t>(idx)];
                if (eligible_weight > 0) {
                    std::int64_t ticket = static_cast<std::int64_t>(
                        rng.next_below(static_cast<std::uint64_t>(eligible_weight)));
                    for (size_t idx = 0; idx < pool.size(); ++idx) {
                        bool used = false;
                        for (int u : on_paper) used = used || u == static_cast<int>(idx);
                        if (used) continue;
                        ticket -= j_counts[idx];
                        if (ticket < 0) {
                            chosen = static_cast<int>(idx);
                            break;
                        }
                    }
                }
            }
            if (chosen < 0) {
                std::snprintf(buf, sizeof buf, "C. Author%05zu", pool.size() + 1);
                pool.emplace_back(buf);
                j_counts.push_back(0);
                chosen = static_cast<int>(pool.size()) - 1;
            }
            on_paper.push_back(chosen);
            rec.raw_authors.push_back(pool[static_cast<size_t>(chosen)]);
        }
        // update attachment weights only after the whole paper is assembled
        for (int idx : on_paper) {
            ++j_counts[static_cast<size_t>(idx)];
            ++total_j;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace cacore

#endif
