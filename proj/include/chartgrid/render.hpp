#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "chartgrid/dataset.hpp"
#include "chartgrid/font.hpp"
#include "chartgrid/raster.hpp"

namespace chartgrid {

struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Plot-area pixel bounds plus the affine data->pixel transform.
/// The frame lines sit on `left`, `right`, `top`, `bottom`; the data rectangle
/// (x_min, y_min)-(x_max, y_max) maps onto exactly that frame.
struct PlotGeometry {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    double x_scale() const noexcept { return (right - left) / (x_max - x_min); }
    double y_scale() const noexcept { return (bottom - top) / (y_max - y_min); }

    PixelPoint forward(double x, double y) const noexcept
    {
        return {left + (x - x_min) * x_scale(), bottom - (y - y_min) * y_scale()};
    }

    std::pair<int, int> to_pixel(double x, double y) const noexcept
    {
        auto p = forward(x, y);
        return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
    }

    Point inverse(double px, double py) const noexcept
    {
        return {x_min + (px - left) / x_scale(), y_min + (bottom - py) / y_scale()};
    }

    bool strictly_inside(int px, int py) const noexcept
    {
        return px > left && px < right && py > top && py < bottom;
    }
};

struct RenderedChart {
    RasterImage image;
    PlotGeometry geometry;
};

namespace detail {

inline constexpr std::array<Rgb, 5> palette{{
    {31, 119, 180}, {214, 39, 40}, {44, 160, 44}, {255, 127, 14}, {148, 103, 189}}};

inline const std::array<DashPattern, 5>& mono_dashes()
{
    static const std::array<DashPattern, 5> d{{{}, {12, 6}, {3, 4}, {12, 4, 3, 4}, {20, 8}}};
    return d;
}

inline constexpr Rgb gridline_gray{220, 220, 220};
inline constexpr Rgb text_color{30, 30, 30};

/// Tick step from the 1-2-2.5-5 ladder closest (in log scale) to span/target.
inline double nice_step(double span, int target)
{
    double raw = span / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double best = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (std::abs(std::log(raw / (m * mag))) < std::abs(std::log(raw / best)))
            best = m * mag;
    return best;
}

inline std::vector<double> ticks(double lo, double hi, int target = 6)
{
    double step = nice_step(hi - lo, target);
    std::vector<double> out;
    for (double k = std::ceil(lo / step); k * step <= hi + 1e-9 * step; k += 1.0) {
        double v = k * step;
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return out;
}

inline std::string tick_label(double v, double step)
{
    int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
    if (std::abs(step * std::pow(10.0, decimals) - std::round(step * std::pow(10.0, decimals))) > 1e-6)
        ++decimals;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string axis_title(const AxisInfo& a)
{
    return a.unit ? a.label + " (" + *a.unit + ")" : a.label;
}

} // namespace detail

/// Rasterizes one chart. Layout is fixed-margin; an outside legend takes a column on the right.
inline RenderedChart render_chart(const ChartGroundTruth& gt)
{
    for (const auto* a : {&gt.x_axis, &gt.y_axis})
        if (!(a->min < a->max) || !std::isfinite(a->min) || !std::isfinite(a->max))
            throw RenderError("chart '" + gt.id + "': degenerate axis range on '" + a->label + "'");
    const auto& st = gt.style;
    if (st.width_px <= 0 || st.height_px <= 0 || std::max(st.width_px, st.height_px) > max_image_dimension)
        throw RenderError("chart '" + gt.id + "': image size out of bounds");

    constexpr int legend_col = 170;
    const bool outside = st.legend == LegendPlacement::outside_plot;
    PlotGeometry g;
    g.left = 90;
    g.top = 50;
    g.right = st.width_px - 1 - (outside ? legend_col + 20 : 30);
    g.bottom = st.height_px - 1 - 65;
    g.x_min = gt.x_axis.min;
    g.x_max = gt.x_axis.max;
    g.y_min = gt.y_axis.min;
    g.y_max = gt.y_axis.max;
    if (g.right - g.left < 40 || g.bottom - g.top < 40)
        throw RenderError("chart '" + gt.id + "': image too small for plot area");

    RasterImage img(st.width_px, st.height_px, colors::white);

    // Title, scaled up when it fits.
    int title_scale = font::text_width(gt.title) * 2 <= st.width_px - 20 ? 2 : 1;
    int tw = font::text_width(gt.title) * title_scale;
    font::draw_text(img, (st.width_px - tw) / 2, 12, gt.title, detail::text_color, title_scale);

    auto xt = detail::ticks(g.x_min, g.x_max);
    auto yt = detail::ticks(g.y_min, g.y_max);
    double xstep = xt.size() > 1 ? xt[1] - xt[0] : g.x_max - g.x_min;
    double ystep = yt.size() > 1 ? yt[1] - yt[0] : g.y_max - g.y_min;

    if (st.gridlines) {
        for (double v : xt) {
            int px = g.to_pixel(v, g.y_min).first;
            for (int y = g.top + 1; y < g.bottom; ++y)
                img.plot(px, y, detail::gridline_gray);
        }
        for (double v : yt) {
            int py = g.to_pixel(g.x_min, v).second;
            for (int x = g.left + 1; x < g.right; ++x)
                img.plot(x, py, detail::gridline_gray);
        }
    }

    stroke_rect(img, g.left, g.top, g.right, g.bottom, colors::black);
    for (double v : xt) {
        int px = g.to_pixel(v, g.y_min).first;
        for (int k = 1; k <= 5; ++k)
            img.plot(px, g.bottom + k, colors::black);
        auto lbl = detail::tick_label(v, xstep);
        font::draw_text(img, px - font::text_width(lbl) / 2, g.bottom + 9, lbl, detail::text_color);
    }
    for (double v : yt) {
        int py = g.to_pixel(g.x_min, v).second;
        for (int k = 1; k <= 5; ++k)
            img.plot(g.left - k, py, colors::black);
        auto lbl = detail::tick_label(v, ystep);
        font::draw_text(img, g.left - 9 - font::text_width(lbl), py - font::glyph_height / 2, lbl, detail::text_color);
    }

    auto xlabel = detail::axis_title(gt.x_axis);
    font::draw_text(img, (g.left + g.right - font::text_width(xlabel)) / 2, g.bottom + 32, xlabel, detail::text_color);
    auto ylabel = detail::axis_title(gt.y_axis);
    font::draw_text_vertical(img, 12, (g.top + g.bottom + font::text_width(ylabel)) / 2, ylabel, detail::text_color);

    const bool mono = st.color_mode == ColorMode::monochrome;
    auto series_color = [&](std::size_t i) { return mono ? colors::black : detail::palette[i % detail::palette.size()]; };
    auto series_dash = [&](std::size_t i) { return mono ? detail::mono_dashes()[i % 5] : DashPattern{}; };

    for (std::size_t i = 0; i < gt.series.size(); ++i) {
        Stroker pen(img, series_color(i), 2, series_dash(i));
        const auto& pts = gt.series[i].points;
        for (std::size_t k = 1; k < pts.size(); ++k) {
            auto a = g.forward(pts[k - 1].x, pts[k - 1].y);
            auto b = g.forward(pts[k].x, pts[k].y);
            pen.line(a.x, a.y, b.x, b.y);
        }
    }

    // Legend: one row per series with a stroke sample.
    int max_name = 0;
    for (const auto& s : gt.series)
        max_name = std::max(max_name, font::text_width(s.name));
    const int row_h = 18;
    int box_w = std::min(40 + max_name + 12, outside ? legend_col : (g.right - g.left) / 2);
    int box_h = static_cast<int>(gt.series.size()) * row_h + 8;
    int bx = outside ? g.right + 20 : g.right - box_w - 10;
    int by = outside ? g.top : g.top + 10;
    fill_rect(img, bx, by, bx + box_w, by + box_h, colors::white);
    stroke_rect(img, bx, by, bx + box_w, by + box_h, colors::black);
    for (std::size_t i = 0; i < gt.series.size(); ++i) {
        int cy = by + 4 + static_cast<int>(i) * row_h + row_h / 2;
        Stroker pen(img, series_color(i), 2, series_dash(i));
        pen.line(bx + 6, cy, bx + 34, cy);
        font::draw_text(img, bx + 40, cy - font::glyph_height / 2, gt.series[i].name, detail::text_color);
    }

    return {std::move(img), g};
}

} // namespace chartgrid
