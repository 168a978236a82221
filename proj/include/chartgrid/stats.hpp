#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "chartgrid/errors.hpp"

namespace chartgrid::stats {

inline constexpr double alpha = 0.05;

struct Descriptive {
    double mean = 0.0;
    double std_dev = 0.0;
};

/// Arithmetic mean and sample (n-1) standard deviation.
inline Descriptive descriptive(std::span<const double> xs)
{
    if (xs.size() < 2)
        throw InsufficientDataError("standard deviation needs at least 2 values");
    const double n = static_cast<double>(xs.size());
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank

enum class WilcoxonMode { exact, normal_approx };

inline std::string_view to_string(WilcoxonMode m) noexcept
{
    return m == WilcoxonMode::exact ? "exact" : "normal_approx";
}

struct WilcoxonResult {
    double w_statistic = 0.0; ///< min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    int n_effective = 0;
    double p_value = 1.0;
    WilcoxonMode mode = WilcoxonMode::exact;
    bool significant = false;

    friend bool operator==(const WilcoxonResult&, const WilcoxonResult&) = default;
};

struct WilcoxonOptions {
    /// Largest n_effective handled by the exact null distribution.
    int exact_max_n = 25;
    enum class Force { none, exact, normal } force = Force::none;
};

/// Average ranks (1-based) of `values`; ties share the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

/// Two-sided exact p for the observed statistic under the sign-flip null,
/// enumerated by a DP over the (possibly tied) ranks. Ranks are multiples of 1/2,
/// so the DP runs on doubled integer ranks.
inline double exact_signed_rank_p(std::span<const double> ranks, double w)
{
    std::vector<int> twice(ranks.size());
    int total = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        twice[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
        total += twice[i];
    }
    // counts[s] = number of sign patterns whose doubled positive-rank sum is s.
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
    counts[0] = 1;
    int reach = 0;
    for (int r : twice) {
        for (int s = reach; s >= 0; --s)
            if (counts[static_cast<std::size_t>(s)])
                counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
        reach += r;
    }
    const long long limit = std::llround(2.0 * w);
    std::uint64_t tail = 0;
    for (long long s = 0; s <= limit && s <= total; ++s)
        tail += counts[static_cast<std::size_t>(s)];
    double p = 2.0 * std::ldexp(static_cast<double>(tail), -static_cast<int>(ranks.size()));
    return std::min(1.0, p);
}

/// Normal approximation with tie and continuity corrections.
inline double normal_signed_rank_p(std::span<const double> abs_diffs, double w)
{
    const double n = static_cast<double>(abs_diffs.size());
    const double mean = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    std::vector<double> sorted(abs_diffs.begin(), abs_diffs.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
            ++j;
        double t = static_cast<double>(j - i + 1);
        var -= (t * t * t - t) / 48.0;
        i = j + 1;
    }
    if (var <= 0.0)
        return 1.0;
    double z = std::max(0.0, std::abs(w - mean) - 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

/// Paired two-sided Wilcoxon signed-rank test on d = a - b. Zero differences are dropped.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                           WilcoxonOptions opt = {})
{
    if (a.size() != b.size())
        throw EvaluationError("wilcoxon: samples differ in length (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0)
            diffs.push_back(d);
    }
    if (diffs.size() < 5)
        throw InsufficientDataError("wilcoxon: need at least 5 non-zero paired differences, have " +
                                    std::to_string(diffs.size()));

    std::vector<double> mags(diffs.size());
    std::transform(diffs.begin(), diffs.end(), mags.begin(), [](double d) { return std::abs(d); });
    auto ranks = average_ranks(mags);

    WilcoxonResult r;
    r.n_effective = static_cast<int>(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i)
        (diffs[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
    r.w_statistic = std::min(r.w_plus, r.w_minus);

    bool exact = r.n_effective <= opt.exact_max_n;
    if (opt.force == WilcoxonOptions::Force::exact)
        exact = true;
    else if (opt.force == WilcoxonOptions::Force::normal)
        exact = false;
    if (exact && r.n_effective > 60)
        throw EvaluationError("wilcoxon: exact mode limited to n <= 60");

    r.mode = exact ? WilcoxonMode::exact : WilcoxonMode::normal_approx;
    r.p_value = exact ? exact_signed_rank_p(ranks, r.w_statistic) : normal_signed_rank_p(mags, r.w_statistic);
    r.significant = r.p_value < alpha;
    return r;
}

// ---------------------------------------------------------------------------
// Box plot

struct BoxplotStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;

    friend bool operator==(const BoxplotStats&, const BoxplotStats&) = default;
};

/// Quantile by linear interpolation between order statistics, h = (n-1)p.
inline double quantile_sorted(std::span<const double> sorted, double p)
{
    double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Tukey box plot: whiskers reach the most extreme observations within 1.5 IQR of the quartiles.
inline BoxplotStats boxplot_stats(std::span<const double> xs)
{
    if (xs.empty())
        throw InsufficientDataError("boxplot needs at least one value");
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    BoxplotStats b;
    b.q1 = quantile_sorted(s, 0.25);
    b.median = quantile_sorted(s, 0.5);
    b.q3 = quantile_sorted(s, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.whisker_low = std::numeric_limits<double>::infinity();
    b.whisker_high = -std::numeric_limits<double>::infinity();
    for (double v : s) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
            continue;
        }
        b.whisker_low = std::min(b.whisker_low, v);
        b.whisker_high = std::max(b.whisker_high, v);
    }
    b.whisker_low = std::min(b.whisker_low, b.q1);
    b.whisker_high = std::max(b.whisker_high, b.q3);
    return b;
}

} // namespace chartgrid::stats
