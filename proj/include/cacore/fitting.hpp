#ifndef CACORE_FITTING_HPP
#define CACORE_FITTING_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cacore/metrics.hpp"
#include "cacore/record.hpp"

namespace cacore {

struct InsufficientData : Error {
    using Error::Error;
};
struct DegenerateDesign : Error {
    using Error::Error;
};

struct FitPoint {
    double r = 0;
    double j = 0;
};

enum class RangeKind { whole, central, explicit_box };

// Which (r, J) box enters a fit. The central range zooms on the coauthor
// core: r <= r_cf and J <= r_cf with r_cf = 3 m_A, which emphasizes the most
// frequent coauthors while capping the very high J outliers.
struct FitRange {
    RangeKind kind = RangeKind::whole;
    int r_max = 0;
    int j_max = 0;
    int r_cf = 0;  // set for central ranges

    std::string label() const {
        switch (kind) {
            case RangeKind::whole: return "whole";
            case RangeKind::central: return "central(r_cf=" + std::to_string(r_cf) + ")";
            case RangeKind::explicit_box:
                return "box(r<=" + std::to_string(r_max) + ",J<=" + std::to_string(j_max) + ")";
        }
        return "?";
    }
};

inline std::vector<FitPoint> to_points(const RankFrequencyDistribution& dist) {
    std::vector<FitPoint> pts;
    pts.reserve(dist.entries.size());
    for (const RankEntry& e : dist.entries)
        pts.push_back({static_cast<double>(e.rank), static_cast<double>(e.joint_pubs)});
    return pts;
}

inline std::vector<FitPoint> apply_range(std::span<const FitPoint> pts, const FitRange& range) {
    std::vector<FitPoint> kept;
    for (const FitPoint& p : pts) {
        if (range.kind == RangeKind::whole ||
            (p.r <= range.r_max + 1e-12 && p.j <= range.j_max + 1e-12))
            kept.push_back(p);
    }
    return kept;
}

inline constexpr int kMinFitPoints = 3;

// Select the fit window. Fewer than 3 surviving points is refused, never
// silently widened.
inline FitRange select_range(const RankFrequencyDistribution& dist, RangeKind kind, int m_a) {
    FitRange range;
    range.kind = kind;
    switch (kind) {
        case RangeKind::whole:
            range.r_max = dist.r_max();
            range.j_max = dist.empty() ? 0 : dist.entries.front().joint_pubs;
            break;
        case RangeKind::central:
            if (m_a < 1)
                throw InsufficientData("central range needs m_A >= 1 (got " +
                                       std::to_string(m_a) + ")");
            range.r_cf = 3 * m_a;
            range.r_max = range.r_cf;
            range.j_max = range.r_cf;
            break;
        case RangeKind::explicit_box:
            throw UsageError("explicit range needs select_range(dist, r_max, j_max)");
    }
    std::vector<FitPoint> pts = to_points(dist);
    size_t surviving = apply_range(pts, range).size();
    if (surviving < kMinFitPoints)
        throw InsufficientData("only " + std::to_string(surviving) +
                               " points survive range " + range.label() +
                               " (need >= " + std::to_string(kMinFitPoints) + ")");
    return range;
}

inline FitRange select_range(const RankFrequencyDistribution& dist, int r_max, int j_max) {
    FitRange range{RangeKind::explicit_box, r_max, j_max, 0};
    size_t surviving = apply_range(to_points(dist), range).size();
    if (surviving < kMinFitPoints)
        throw InsufficientData("only " + std::to_string(surviving) +
                               " points survive range " + range.label() +
                               " (need >= " + std::to_string(kMinFitPoints) + ")");
    return range;
}

struct PowerLawFit {
    double alpha = 0;      // J ~ prefactor / r^alpha
    double prefactor = 0;
    double r_squared = 0;  // coefficient of determination in log-log space
    FitRange range;
    int n_points = 0;
    bool zero_variance = false;  // flat data: R^2 reported as 1.0 by convention

    double predict(double r) const { return prefactor * std::pow(r, -alpha); }
};

struct ZipfMandelbrotFit {
    double j_star = 0;  // J = j_star / (nu + r)^zeta
    double nu = 0;
    double zeta = 0;
    double r_squared = 0;
    FitRange range;
    int n_points = 0;

    double predict(double r) const { return j_star / std::pow(nu + r, zeta); }
};

struct FitFailure : Error {
    FitFailure(const std::string& msg, ZipfMandelbrotFit best_so_far)
        : Error(msg), best(best_so_far) {}
    ZipfMandelbrotFit best;
};

namespace fit_detail {

struct LogLine {
    double slope = 0;
    double intercept = 0;
    double sse = 0;
    double syy = 0;
    bool zero_variance = false;
};

// OLS of ln J on ln(nu + r). All J >= 1 and r >= 1 by construction, so the
// logs are always defined.
inline LogLine ols_log(std::span<const FitPoint> pts, double nu) {
    const size_t n = pts.size();
    double sx = 0, sy = 0;
    for (const FitPoint& p : pts) {
        sx += std::log(nu + p.r);
        sy += std::log(p.j);
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (const FitPoint& p : pts) {
        const double dx = std::log(nu + p.r) - mx;
        const double dy = std::log(p.j) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0)
        throw DegenerateDesign("all points share the same rank; slope is undefined");
    LogLine line;
    // flat data: accumulated rounding leaves syy at ~(eps*|y|)^2*n, not 0
    const double noise_floor =
        static_cast<double>(n) * (1e-14 * (1.0 + std::abs(my))) * (1e-14 * (1.0 + std::abs(my)));
    if (syy <= noise_floor) {
        line.slope = 0.0;
        line.intercept = my;
        line.sse = 0.0;
        line.syy = 0.0;
        line.zero_variance = true;
        return line;
    }
    line.slope = sxy / sxx;
    line.intercept = my - line.slope * mx;
    line.sse = std::max(0.0, syy - line.slope * sxy);
    line.syy = syy;
    return line;
}

inline double r_squared_of(const LogLine& line) {
    if (line.zero_variance) return 1.0;  // flat data: vacuously perfect
    return std::clamp(1.0 - line.sse / line.syy, 0.0, 1.0);
}

}  // namespace fit_detail

// Ordinary least squares of ln J on ln r. alpha = -slope, prefactor =
// exp(intercept), R^2 computed on the log-transformed values.
inline PowerLawFit fit_power_law(std::span<const FitPoint> pts, const FitRange& range) {
    std::vector<FitPoint> in_range = apply_range(pts, range);
    if (in_range.size() < kMinFitPoints)
        throw InsufficientData("power-law fit needs >= " + std::to_string(kMinFitPoints) +
                               " points, got " + std::to_string(in_range.size()));
    for (const FitPoint& p : in_range)
        if (p.r <= 0 || p.j <= 0)
            throw InvalidInput("fit points need r > 0 and J > 0");
    fit_detail::LogLine line = fit_detail::ols_log(in_range, 0.0);
    PowerLawFit fit;
    fit.alpha = -line.slope;
    fit.prefactor = std::exp(line.intercept);
    fit.r_squared = fit_detail::r_squared_of(line);
    fit.zero_variance = line.zero_variance;
    fit.range = range;
    fit.n_points = static_cast<int>(in_range.size());
    return fit;
}

inline PowerLawFit fit_power_law(const RankFrequencyDistribution& dist, const FitRange& range) {
    std::vector<FitPoint> pts = to_points(dist);
    return fit_power_law(pts, range);
}

namespace fit_detail {

inline ZipfMandelbrotFit zm_at(std::span<const FitPoint> pts, double nu, const FitRange& range) {
    LogLine line = ols_log(pts, nu);
    ZipfMandelbrotFit fit;
    fit.nu = nu;
    fit.zeta = -line.slope;
    fit.j_star = std::exp(line.intercept);
    fit.r_squared = r_squared_of(line);
    fit.range = range;
    fit.n_points = static_cast<int>(pts.size());
    return fit;
}

}  // namespace fit_detail

// Nonlinear least squares in log space for J = J* / (nu + r)^zeta: an outer
// one-dimensional search over nu >= 0 (coarse grid over [0, r_max], then
// golden-section refinement to 1e-9) with a closed-form inner OLS for
// (ln J*, zeta) at each nu. Deterministic; nu = 0 reduces exactly to the
// power-law fit, so the ZM residual can never exceed the power-law residual
// on the same points.
inline ZipfMandelbrotFit fit_zipf_mandelbrot(std::span<const FitPoint> pts,
                                             const FitRange& range,
                                             std::optional<double> fixed_nu = std::nullopt) {
    std::vector<FitPoint> in_range = apply_range(pts, range);
    if (in_range.size() < 4)
        throw InsufficientData("Zipf-Mandelbrot fit needs >= 4 points, got " +
                               std::to_string(in_range.size()));
    for (const FitPoint& p : in_range)
        if (p.r <= 0 || p.j <= 0)
            throw InvalidInput("fit points need r > 0 and J > 0");
    if (fixed_nu) {
        if (*fixed_nu < 0) throw UsageError("nu must be >= 0");
        return fit_detail::zm_at(in_range, *fixed_nu, range);
    }

    auto sse_at = [&](double nu) { return fit_detail::ols_log(in_range, nu).sse; };

    double r_top = 0;
    for (const FitPoint& p : in_range) r_top = std::max(r_top, p.r);

    // coarse pass
    constexpr int kGridSteps = 256;
    const double step = r_top / kGridSteps;
    double best_nu = 0, best_sse = sse_at(0.0);
    for (int i = 1; i <= kGridSteps; ++i) {
        const double nu = i * step;
        const double sse = sse_at(nu);
        if (sse < best_sse) {
            best_sse = sse;
            best_nu = nu;
        }
    }

    // golden-section refinement inside the bracketing grid cells
    const double golden = 0.6180339887498949;
    double lo = std::max(0.0, best_nu - step);
    double hi = std::min(r_top, best_nu + step);
    double x1 = hi - golden * (hi - lo);
    double x2 = lo + golden * (hi - lo);
    double f1 = sse_at(x1), f2 = sse_at(x2);
    constexpr double kNuTolerance = 1e-9;
    constexpr int kMaxIterations = 200;
    int iter = 0;
    while (hi - lo > kNuTolerance && iter < kMaxIterations) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = sse_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = sse_at(x2);
        }
        ++iter;
    }
    double nu_hat = 0.5 * (lo + hi);
    if (nu_hat < kNuTolerance) nu_hat = 0.0;  // snap to the power-law boundary
    ZipfMandelbrotFit fit = fit_detail::zm_at(in_range, nu_hat, range);
    if (hi - lo > 1e-6)
        throw FitFailure("nu search did not converge below 1e-6 within " +
                             std::to_string(kMaxIterations) + " iterations",
                         fit);
    return fit;
}

inline ZipfMandelbrotFit fit_zipf_mandelbrot(const RankFrequencyDistribution& dist,
                                             const FitRange& range,
                                             std::optional<double> fixed_nu = std::nullopt) {
    std::vector<FitPoint> pts = to_points(dist);
    return fit_zipf_mandelbrot(pts, range, fixed_nu);
}

struct EffectThresholds {
    double king_ratio = 2.0;   // observed/fitted J at a rank to call it a king
    double queen_r2_gain = 0.02;  // required R^2 improvement of ZM over power law
    double queen_nu = 1.0;        // required fitted nu
};

// King: sharp upturn at the lowest ranks above the hyperbolic trend.
// Queen: horizontal curbing at low ranks, visible as a large ZM offset nu.
struct EffectReport {
    bool king = false;
    double king_strength = 0;  // observed J(1) / J(1) predicted by the trend
    std::vector<int> affected_ranks;
    bool queen = false;
    double queen_nu = 0;
    double queen_r2_gain = 0;
};

// The king test compares each low rank against the trend fitted on the
// remaining ranks: starting from the given whole-range fit, the affected
// prefix grows while the next rank still exceeds the prediction of a fit
// that excludes the prefix. This keeps one dominant coauthor from dragging
// the reference trend toward itself.
inline EffectReport detect_effects(std::span<const FitPoint> pts, const PowerLawFit& power_fit,
                                   const EffectThresholds& thresholds = {}) {
    EffectReport report;
    std::vector<FitPoint> sorted(pts.begin(), pts.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const FitPoint& a, const FitPoint& b) { return a.r < b.r; });
    if (sorted.empty()) return report;

    size_t prefix = 0;
    PowerLawFit trend = power_fit;
    while (prefix < sorted.size()) {
        const FitPoint& next = sorted[prefix];
        double predicted = trend.predict(next.r);
        if (predicted <= 0 || next.j / predicted <= thresholds.king_ratio) break;
        ++prefix;
        if (sorted.size() - prefix < kMinFitPoints) break;  // too few points to refit
        std::vector<FitPoint> rest(sorted.begin() + static_cast<long>(prefix), sorted.end());
        try {
            trend = fit_power_law(rest, FitRange{RangeKind::whole, 0, 0, 0});
        } catch (const DegenerateDesign&) {
            break;
        }
    }
    for (size_t i = 0; i < prefix; ++i)
        report.affected_ranks.push_back(static_cast<int>(std::lround(sorted[i].r)));
    report.king = prefix > 0;
    double pred1 = trend.predict(sorted.front().r);
    report.king_strength = pred1 > 0 ? sorted.front().j / pred1 : 0.0;

    try {
        ZipfMandelbrotFit zm = fit_zipf_mandelbrot(pts, power_fit.range);
        report.queen_nu = zm.nu;
        report.queen_r2_gain = zm.r_squared - power_fit.r_squared;
        report.queen = report.queen_r2_gain > thresholds.queen_r2_gain &&
                       zm.nu > thresholds.queen_nu;
    } catch (const InsufficientData&) {
        // fewer than 4 points: queen test unavailable, stays negative
    } catch (const FitFailure&) {
    }
    return report;
}

inline EffectReport detect_effects(const RankFrequencyDistribution& dist,
                                   const PowerLawFit& power_fit,
                                   const EffectThresholds& thresholds = {}) {
    std::vector<FitPoint> pts = to_points(dist);
    return detect_effects(pts, power_fit, thresholds);
}

}  // namespace cacore

#endif
