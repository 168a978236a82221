#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>

#include "chartgrid/dataset.hpp"
#include "chartgrid/errors.hpp"
#include "chartgrid/extraction/result.hpp"
#include "chartgrid/rng.hpp"

namespace chartgrid {

/// Corruptions the mock extractor applies to ground truth.
struct NoiseModel {
    int sample_count = 20;
    double y_sigma_frac = 0.0; ///< Gaussian sigma as a fraction of the y-axis range.
    double name_corruption_prob = 0.0;
    double series_drop_prob = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

inline void validate(const NoiseModel& n)
{
    if (n.sample_count < 2)
        throw ConfigError("sample_count must be at least 2", "noise.sample_count");
    if (!(n.y_sigma_frac >= 0.0) || !std::isfinite(n.y_sigma_frac))
        throw ConfigError("y_sigma_frac must be >= 0", "noise.y_sigma_frac");
    if (!(n.name_corruption_prob >= 0.0 && n.name_corruption_prob <= 1.0))
        throw ConfigError("name_corruption_prob must lie in [0, 1]", "noise.name_corruption_prob");
    if (!(n.series_drop_prob >= 0.0 && n.series_drop_prob <= 1.0))
        throw ConfigError("series_drop_prob must lie in [0, 1]", "noise.series_drop_prob");
}

inline std::string describe(const NoiseModel& n)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "n=%d,sigma=%.17g,rename=%.17g,drop=%.17g,seed=%llu", n.sample_count,
                  n.y_sigma_frac, n.name_corruption_prob, n.series_drop_prob,
                  static_cast<unsigned long long>(n.seed));
    return buf;
}

/// Gold indices round(k (n-1) / (m-1)), k = 0..m-1: m positions spread evenly over the
/// gold x-range, landing on gold samples so the noiseless values are exact.
inline std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t m)
{
    std::set<std::size_t> idx;
    if (n == 0)
        return {};
    if (n == 1 || m < 2)
        return {0};
    m = std::min(m, n);
    for (std::size_t k = 0; k < m; ++k)
        idx.insert((2 * k * (n - 1) + (m - 1)) / (2 * (m - 1)));
    return {idx.begin(), idx.end()};
}

/// Emulates a model's sparse reading of a chart: subsample, add y-noise, and
/// optionally rename or drop series. Deterministic per (chart id, noise seed).
inline ExtractionResult mock_extract(const ChartGroundTruth& gt, const NoiseModel& noise)
{
    validate(noise);
    Rng rng(mix_seed(noise.seed, fnv1a64(gt.id)));
    const double sigma = noise.y_sigma_frac * gt.y_axis.span();

    ExtractionResult r;
    r.label = gt.title;
    r.x_axis_info = gt.x_axis.unit ? gt.x_axis.label + " (" + *gt.x_axis.unit + ")" : gt.x_axis.label;
    r.y_axis_info = gt.y_axis.unit ? gt.y_axis.label + " (" + *gt.y_axis.unit + ")" : gt.y_axis.label;
    for (std::size_t s = 0; s < gt.series.size(); ++s) {
        const auto& src = gt.series[s];
        bool drop = rng.bernoulli(noise.series_drop_prob);
        bool rename = rng.bernoulli(noise.name_corruption_prob);
        SeriesData out;
        out.name = rename ? "Line " + std::string(1, static_cast<char>('A' + s % 26)) : src.name;
        for (auto i : subsample_indices(src.points.size(), static_cast<std::size_t>(noise.sample_count))) {
            double y = src.points[i].y;
            if (sigma > 0.0)
                y += sigma * rng.normal();
            out.points.push_back({src.points[i].x, y});
        }
        if (!drop)
            r.series.push_back(std::move(out));
    }
    return r;
}

/// Wraps a result the way a chat model tends to answer: a sentence plus a fenced JSON block.
inline std::string format_as_model_response(const ExtractionResult& r)
{
    return "Here is the data extracted from the chart.\n```json\n" + to_json(r).dump(2) + "\n```\n";
}

} // namespace chartgrid
