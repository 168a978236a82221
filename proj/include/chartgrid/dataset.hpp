#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chartgrid/errors.hpp"
#include "chartgrid/rng.hpp"

namespace chartgrid {

inline constexpr int max_image_dimension = 1200;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

struct SeriesData {
    std::string name;
    std::vector<Point> points;

    friend bool operator==(const SeriesData&, const SeriesData&) = default;
};

struct AxisInfo {
    std::string label;
    std::optional<std::string> unit;
    double min = 0.0;
    double max = 1.0;

    double span() const noexcept { return max - min; }

    friend bool operator==(const AxisInfo&, const AxisInfo&) = default;
};

enum class ColorMode { monochrome, color };
enum class LegendPlacement { inside_plot, outside_plot };

struct ChartStyle {
    ColorMode color_mode = ColorMode::color;
    LegendPlacement legend = LegendPlacement::inside_plot;
    bool gridlines = false;
    int width_px = 800;
    int height_px = 600;

    friend bool operator==(const ChartStyle&, const ChartStyle&) = default;
};

/// The four visual variants every dataset must cover.
enum class StyleVariant { monochrome, legend_inside, legend_outside, gridlines };

inline constexpr std::array<StyleVariant, 4> all_style_variants{
    StyleVariant::monochrome, StyleVariant::legend_inside, StyleVariant::legend_outside, StyleVariant::gridlines};

/// Total classification: monochrome wins, then gridlines, then legend placement.
inline StyleVariant classify(const ChartStyle& s) noexcept
{
    if (s.color_mode == ColorMode::monochrome)
        return StyleVariant::monochrome;
    if (s.gridlines)
        return StyleVariant::gridlines;
    return s.legend == LegendPlacement::inside_plot ? StyleVariant::legend_inside : StyleVariant::legend_outside;
}

inline std::string_view to_string(StyleVariant v) noexcept
{
    switch (v) {
    case StyleVariant::monochrome: return "monochrome";
    case StyleVariant::legend_inside: return "legend_inside";
    case StyleVariant::legend_outside: return "legend_outside";
    case StyleVariant::gridlines: return "gridlines";
    }
    return "?";
}

struct ChartGroundTruth {
    std::string id;
    std::string title;
    AxisInfo x_axis;
    AxisInfo y_axis;
    std::vector<SeriesData> series;
    ChartStyle style;
    std::uint64_t seed = 0;

    std::vector<std::string> series_names() const
    {
        std::vector<std::string> names;
        names.reserve(series.size());
        for (const auto& s : series)
            names.push_back(s.name);
        return names;
    }

    friend bool operator==(const ChartGroundTruth&, const ChartGroundTruth&) = default;
};

// ---------------------------------------------------------------------------
// Signal generators

enum class SignalFamily { sine, random_walk, volatile_walk, polynomial };

inline std::string_view to_string(SignalFamily f) noexcept
{
    switch (f) {
    case SignalFamily::sine: return "sine";
    case SignalFamily::random_walk: return "random_walk";
    case SignalFamily::volatile_walk: return "volatile";
    case SignalFamily::polynomial: return "polynomial";
    }
    return "?";
}

inline SignalFamily signal_family_from_string(std::string_view name)
{
    if (name == "sine")
        return SignalFamily::sine;
    if (name == "random_walk")
        return SignalFamily::random_walk;
    if (name == "volatile")
        return SignalFamily::volatile_walk;
    if (name == "polynomial")
        return SignalFamily::polynomial;
    throw ConfigError("unknown signal family '" + std::string(name) + "'", "signal.family");
}

/// Parameters of one synthetic series. Which fields matter depends on `family`:
///   sine:        offset + amplitude * sin(frequency * x + phase)
///   random_walk: starts at offset, Gaussian steps of step_frac * amplitude, plus drift per step
///   volatile:    random walk whose points additionally receive impulse spikes
///   polynomial:  offset + amplitude * (c1 t + c2 t^2 + c3 t^3), t in [-1, 1] across the x-range
struct SignalSpec {
    SignalFamily family = SignalFamily::sine;
    double x_min = 0.0;
    double x_max = 1.0;
    double offset = 0.0;
    double amplitude = 1.0;
    double frequency = 1.0;
    double phase = 0.0;
    double drift = 0.0;
    double step_frac = 0.1;
    double impulse_prob = 0.08;
    double impulse_scale = 0.8;
    std::array<double, 3> coefficients{1.0, 0.0, 0.0};
};

/// Equally spaced x over [x_min, x_max]; the endpoints are hit exactly.
inline std::vector<double> equally_spaced(double x_min, double x_max, int n)
{
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[i] = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    xs.back() = x_max;
    return xs;
}

inline SeriesData generate_series(const SignalSpec& spec, int n_points, std::uint64_t seed, std::string name = {})
{
    if (n_points < 2)
        throw ConfigError("n_points must be at least 2", "n_points");
    if (!(spec.x_min < spec.x_max) || !std::isfinite(spec.x_min) || !std::isfinite(spec.x_max))
        throw ConfigError("x-range must satisfy x_min < x_max", "signal.x_range");

    auto xs = equally_spaced(spec.x_min, spec.x_max, n_points);
    SeriesData out{std::move(name), {}};
    out.points.reserve(xs.size());
    Rng rng(seed);

    switch (spec.family) {
    case SignalFamily::sine:
        for (double x : xs)
            out.points.push_back({x, spec.offset + spec.amplitude * std::sin(spec.frequency * x + spec.phase)});
        break;
    case SignalFamily::random_walk:
    case SignalFamily::volatile_walk: {
        const bool spikes = spec.family == SignalFamily::volatile_walk;
        double level = spec.offset;
        for (double x : xs) {
            double y = level;
            if (spikes && rng.bernoulli(spec.impulse_prob)) {
                double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
                y += sign * spec.amplitude * spec.impulse_scale * rng.uniform(0.5, 1.5);
            }
            out.points.push_back({x, y});
            level += spec.drift + spec.step_frac * spec.amplitude * rng.normal();
        }
        break;
    }
    case SignalFamily::polynomial: {
        const auto& c = spec.coefficients;
        for (double x : xs) {
            double t = 2.0 * (x - spec.x_min) / (spec.x_max - spec.x_min) - 1.0;
            out.points.push_back({x, spec.offset + spec.amplitude * (c[0] * t + c[1] * t * t + c[2] * t * t * t)});
        }
        break;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

inline void validate_series(const SeriesData& s)
{
    if (s.points.size() < 2)
        throw InvariantError("series '" + s.name + "' has fewer than 2 points");
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvariantError("series '" + s.name + "' has a non-finite value at index " + std::to_string(i));
        if (i > 0 && !(s.points[i - 1].x < p.x))
            throw InvariantError("series '" + s.name + "' x values are not strictly increasing at index " +
                                 std::to_string(i));
    }
}

inline void validate_style(const ChartStyle& s)
{
    if (s.width_px <= 0 || s.height_px <= 0)
        throw InvariantError("chart dimensions must be positive");
    if (std::max(s.width_px, s.height_px) > max_image_dimension)
        throw InvariantError("chart dimension exceeds " + std::to_string(max_image_dimension) + " px");
}

inline void validate(const ChartGroundTruth& gt)
{
    if (gt.id.empty())
        throw InvariantError("chart id is empty");
    const std::string where = "chart '" + gt.id + "': ";
    if (gt.series.empty() || gt.series.size() > 5)
        throw InvariantError(where + "must have between 1 and 5 series");
    for (const auto* axis : {&gt.x_axis, &gt.y_axis})
        if (!(axis->min < axis->max) || !std::isfinite(axis->min) || !std::isfinite(axis->max))
            throw InvariantError(where + "axis '" + axis->label + "' needs finite min < max");
    validate_style(gt.style);
    try {
        for (const auto& s : gt.series)
            validate_series(s);
    } catch (const InvariantError& e) {
        throw InvariantError(where + e.what());
    }
    const auto& ref = gt.series.front().points;
    for (const auto& s : gt.series) {
        if (s.points.size() != ref.size())
            throw InvariantError(where + "series do not share x coordinates");
        for (std::size_t i = 0; i < ref.size(); ++i)
            if (s.points[i].x != ref[i].x)
                throw InvariantError(where + "series do not share x coordinates");
    }
}

inline void validate_dataset(const std::vector<ChartGroundTruth>& charts)
{
    std::set<std::string> ids;
    for (const auto& c : charts) {
        validate(c);
        if (!ids.insert(c.id).second)
            throw InvariantError("duplicate chart id '" + c.id + "'");
    }
}

// ---------------------------------------------------------------------------
// Dataset builder

struct DatasetConfig {
    int count = 23;
    int n_points = 100;
    int min_series = 1;
    int max_series = 3;
};

/// Pads [lo, hi] by 5% of its span on each side.
inline std::pair<double, double> padded_range(double lo, double hi)
{
    double span = hi - lo;
    double pad = span > 0.0 ? 0.05 * span : std::max(0.05 * std::abs(lo), 0.5);
    return {lo - pad, hi + pad};
}

namespace detail {

struct Theme {
    std::string_view title;
    std::string_view x_label;
    std::string_view x_unit;
    std::string_view y_label;
    std::string_view y_unit;
    double x_min;
    double x_max;
    double level;
    double scale;
    std::array<std::string_view, 3> names;
};

inline constexpr std::array<Theme, 10> themes{{
    {"Volatile Signal Response", "Time", "ms", "Amplitude", "mV", 0.0, 100.0, 50.0, 20.0,
     {"Channel A", "Channel B", "Channel C"}},
    {"Average Temperature by Climate Zone", "Month", "", "Temperature", "degC", 1.0, 12.0, 22.0, 8.0,
     {"Desert", "Equatorial", "Temperate"}},
    {"Reactor Pressure During Startup", "Time", "s", "Pressure", "kPa", 0.0, 600.0, 300.0, 80.0,
     {"Loop 1", "Loop 2", "Loop 3"}},
    {"Battery Discharge Curves", "Time", "h", "Voltage", "V", 0.0, 10.0, 3.7, 0.5,
     {"Cell A", "Cell B", "Cell C"}},
    {"Market Index Level", "Trading Day", "", "Index", "pts", 0.0, 250.0, 1000.0, 150.0,
     {"Index", "Benchmark", "Sector"}},
    {"Regional Population", "Year", "", "Population", "thousands", 1950.0, 2020.0, 500.0, 300.0,
     {"North", "South", "Coast"}},
    {"Received Signal Strength", "Distance", "km", "Power", "dBm", 0.0, 50.0, -60.0, 20.0,
     {"Antenna 1", "Antenna 2", "Antenna 3"}},
    {"Training Loss", "Epoch", "", "Loss", "", 0.0, 100.0, 1.0, 0.6,
     {"Train", "Validation", "Test"}},
    {"Oscillator Output", "Phase", "rad", "Output", "V", 0.0, 12.0, 0.0, 1.0,
     {"Primary", "Secondary", "Reference"}},
    {"Enzyme Activity", "Temperature", "degC", "Activity", "U/mL", 10.0, 70.0, 40.0, 15.0,
     {"Wild Type", "Mutant 1", "Mutant 2"}},
}};

inline constexpr std::array<std::pair<int, int>, 5> sizes{{{800, 600}, {1000, 700}, {1200, 800}, {900, 600}, {1200, 900}}};

inline ChartStyle style_for(StyleVariant v, Rng& rng)
{
    ChartStyle s;
    auto [w, h] = sizes[static_cast<std::size_t>(rng.uniform_int(0, sizes.size() - 1))];
    s.width_px = w;
    s.height_px = h;
    switch (v) {
    case StyleVariant::monochrome:
        s.color_mode = ColorMode::monochrome;
        s.legend = rng.bernoulli(0.5) ? LegendPlacement::inside_plot : LegendPlacement::outside_plot;
        s.gridlines = rng.bernoulli(0.5);
        break;
    case StyleVariant::legend_inside:
        s.legend = LegendPlacement::inside_plot;
        break;
    case StyleVariant::legend_outside:
        s.legend = LegendPlacement::outside_plot;
        break;
    case StyleVariant::gridlines:
        s.legend = rng.bernoulli(0.5) ? LegendPlacement::inside_plot : LegendPlacement::outside_plot;
        s.gridlines = true;
        break;
    }
    return s;
}

inline SignalSpec signal_for(SignalFamily family, const Theme& theme, Rng& rng, int series_index)
{
    SignalSpec spec;
    spec.family = family;
    spec.x_min = theme.x_min;
    spec.x_max = theme.x_max;
    spec.amplitude = theme.scale * rng.uniform(0.4, 1.0);
    spec.offset = theme.level + theme.scale * (series_index - 1) * rng.uniform(0.5, 1.2);
    const double x_span = theme.x_max - theme.x_min;
    spec.frequency = 2.0 * std::numbers::pi * rng.uniform(0.5, 3.0) / x_span;
    spec.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    spec.drift = spec.amplitude * rng.uniform(-0.02, 0.02);
    spec.step_frac = family == SignalFamily::volatile_walk ? 0.15 : 0.1;
    for (auto& c : spec.coefficients)
        c = rng.uniform(-1.0, 1.0);
    return spec;
}

} // namespace detail

inline std::vector<ChartGroundTruth> build_dataset(const DatasetConfig& cfg, std::uint64_t seed)
{
    const int mandatory = static_cast<int>(all_style_variants.size());
    if (cfg.count < mandatory)
        throw ConfigError("count must be at least " + std::to_string(mandatory) + " to cover every style variant",
                          "dataset.count");
    if (cfg.n_points < 2)
        throw ConfigError("n_points must be at least 2", "dataset.n_points");
    if (cfg.min_series < 1 || cfg.max_series > 5 || cfg.min_series > cfg.max_series)
        throw ConfigError("series per chart must satisfy 1 <= min <= max <= 5", "dataset.series");

    Rng rng(seed);
    std::vector<StyleVariant> variants(all_style_variants.begin(), all_style_variants.end());
    while (static_cast<int>(variants.size()) < cfg.count)
        variants.push_back(all_style_variants[static_cast<std::size_t>(rng.uniform_int(0, mandatory - 1))]);
    for (std::size_t i = variants.size() - 1; i > 0; --i)
        std::swap(variants[i], variants[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);

    const int id_width = std::max(2, static_cast<int>(std::to_string(cfg.count).size()));
    constexpr std::array<SignalFamily, 4> families{SignalFamily::sine, SignalFamily::random_walk,
                                                   SignalFamily::volatile_walk, SignalFamily::polynomial};

    std::vector<ChartGroundTruth> charts;
    charts.reserve(static_cast<std::size_t>(cfg.count));
    for (int i = 0; i < cfg.count; ++i) {
        ChartGroundTruth gt;
        gt.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
        Rng crng(gt.seed);

        std::string num = std::to_string(i + 1);
        gt.id = "chart_" + std::string(static_cast<std::size_t>(id_width) - num.size(), '0') + num;

        const auto& theme = detail::themes[static_cast<std::size_t>(crng.uniform_int(0, detail::themes.size() - 1))];
        auto family = families[static_cast<std::size_t>(crng.uniform_int(0, families.size() - 1))];
        gt.title = std::string(theme.title);
        gt.style = detail::style_for(variants[static_cast<std::size_t>(i)], crng);

        int n_series = static_cast<int>(crng.uniform_int(cfg.min_series, cfg.max_series));
        for (int s = 0; s < n_series; ++s) {
            auto spec = detail::signal_for(family, theme, crng, s);
            gt.series.push_back(generate_series(spec, cfg.n_points, crng.next(), std::string(theme.names[s % 3])));
        }
        // Names beyond the theme's three get a numeric suffix.
        for (int s = 3; s < n_series; ++s)
            gt.series[s].name += " " + std::to_string(s / 3 + 1);

        double y_lo = gt.series.front().points.front().y;
        double y_hi = y_lo;
        for (const auto& s : gt.series)
            for (const auto& p : s.points) {
                y_lo = std::min(y_lo, p.y);
                y_hi = std::max(y_hi, p.y);
            }
        auto [xa, xb] = padded_range(theme.x_min, theme.x_max);
        auto [ya, yb] = padded_range(y_lo, y_hi);
        auto unit = [](std::string_view u) { return u.empty() ? std::nullopt : std::optional<std::string>(u); };
        gt.x_axis = {std::string(theme.x_label), unit(theme.x_unit), xa, xb};
        gt.y_axis = {std::string(theme.y_label), unit(theme.y_unit), ya, yb};
        charts.push_back(std::move(gt));
    }
    return charts;
}

} // namespace chartgrid
