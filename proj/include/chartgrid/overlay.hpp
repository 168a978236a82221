#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "chartgrid/errors.hpp"
#include "chartgrid/raster.hpp"

namespace chartgrid {

/// Spatial-priming grid parameters. Defaults: 50x50 cells, 20% black, 1 px.
struct GridConfig {
    int cells_per_axis = 50;
    double opacity = 0.20;
    Rgb color = colors::black;
    int thickness_px = 1;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

inline void validate(const GridConfig& cfg, int width, int height)
{
    if (cfg.cells_per_axis < 2)
        throw ConfigError("cells_per_axis must be at least 2 (got " + std::to_string(cfg.cells_per_axis) + ")",
                          "grid.cells_per_axis");
    if (2 * cfg.cells_per_axis > std::min(width, height))
        throw ConfigError("a " + std::to_string(cfg.cells_per_axis) + "x" + std::to_string(cfg.cells_per_axis) +
                              " grid is too dense for a " + std::to_string(width) + "x" + std::to_string(height) +
                              " image",
                          "grid.cells_per_axis");
    if (!(cfg.opacity > 0.0 && cfg.opacity <= 1.0))
        throw ConfigError("opacity must lie in (0, 1]", "grid.opacity");
    if (cfg.thickness_px < 1)
        throw ConfigError("thickness_px must be at least 1", "grid.thickness_px");
}

/// Interior line positions round(i * dim / cells), i = 1..cells-1. Border lines are not drawn,
/// so `cells` lines-worth of spacing yields exactly `cells` cells along the axis.
inline std::vector<int> grid_line_positions(int dim_px, int cells)
{
    if (cells < 2 || dim_px <= cells)
        throw ConfigError("grid_line_positions needs dim_px > cells >= 2 (got dim_px=" + std::to_string(dim_px) +
                          ", cells=" + std::to_string(cells) + ")");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(cells - 1));
    for (int i = 1; i < cells; ++i) {
        // Integer round-half-up of i*dim/cells.
        long long num = 2LL * i * dim_px + cells;
        out.push_back(static_cast<int>(num / (2LL * cells)));
    }
    return out;
}

/// Per-channel alpha blend with round-half-up.
inline std::uint8_t blend_channel(std::uint8_t base, std::uint8_t over, double alpha) noexcept
{
    double v = (1.0 - alpha) * base + alpha * over;
    v = std::floor(v + 0.5);
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

inline Rgb blend(Rgb base, Rgb over, double alpha) noexcept
{
    return {blend_channel(base.r, over.r, alpha), blend_channel(base.g, over.g, alpha),
            blend_channel(base.b, over.b, alpha)};
}

/// Marks the rows (or columns) covered by grid lines of the given thickness.
inline std::vector<bool> grid_line_mask(int dim_px, int cells, int thickness)
{
    std::vector<bool> mask(static_cast<std::size_t>(dim_px), false);
    for (int p : grid_line_positions(dim_px, cells)) {
        int start = p - (thickness - 1) / 2;
        for (int k = 0; k < thickness; ++k) {
            int q = start + k;
            if (q >= 0 && q < dim_px)
                mask[static_cast<std::size_t>(q)] = true;
        }
    }
    return mask;
}

/// Returns a copy of `image` with the grid composited on top. Each grid pixel is
/// blended once, including at line crossings.
inline RasterImage apply_grid(const RasterImage& image, const GridConfig& cfg)
{
    if (image.empty())
        throw ConfigError("cannot overlay a grid on an empty image");
    validate(cfg, image.width(), image.height());
    auto cols = grid_line_mask(image.width(), cfg.cells_per_axis, cfg.thickness_px);
    auto rows = grid_line_mask(image.height(), cfg.cells_per_axis, cfg.thickness_px);

    RasterImage out = image;
    for (int y = 0; y < out.height(); ++y) {
        const bool row_line = rows[static_cast<std::size_t>(y)];
        for (int x = 0; x < out.width(); ++x)
            if (row_line || cols[static_cast<std::size_t>(x)])
                out.set(x, y, blend(image.at(x, y), cfg.color, cfg.opacity));
    }
    return out;
}

/// One overlay per density. All densities are validated before any image is produced.
inline std::vector<std::pair<int, RasterImage>> sweep_grids(const RasterImage& image, const std::vector<int>& densities,
                                                            const GridConfig& cfg)
{
    for (int d : densities) {
        GridConfig c = cfg;
        c.cells_per_axis = d;
        try {
            validate(c, image.width(), image.height());
        } catch (const ConfigError& e) {
            throw ConfigError("invalid grid density " + std::to_string(d) + ": " + e.what(), "densities");
        }
    }
    std::vector<std::pair<int, RasterImage>> out;
    out.reserve(densities.size());
    for (int d : densities) {
        GridConfig c = cfg;
        c.cells_per_axis = d;
        out.emplace_back(d, apply_grid(image, c));
    }
    return out;
}

inline Rgb parse_hex_color(const std::string& hex)
{
    std::string h = (!hex.empty() && hex[0] == '#') ? hex.substr(1) : hex;
    if (h.size() != 6 || h.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
        throw ConfigError("color must be six hex digits, got '" + hex + "'", "grid.color");
    auto byte = [&](int i) { return static_cast<std::uint8_t>(std::stoi(h.substr(static_cast<std::size_t>(i), 2), nullptr, 16)); };
    return {byte(0), byte(2), byte(4)};
}

inline std::string to_hex(Rgb c)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (std::uint8_t v : {c.r, c.g, c.b}) {
        s.push_back(digits[v >> 4]);
        s.push_back(digits[v & 0xf]);
    }
    return s;
}

} // namespace chartgrid
