#include <gtest/gtest.h>

#include <set>

#include "chartgrid/overlay.hpp"
#include "chartgrid/rng.hpp"

using namespace chartgrid;

namespace {

RasterImage noise_image(int w, int h, std::uint64_t seed)
{
    RasterImage img(w, h);
    Rng rng(seed);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.set(x, y, {static_cast<std::uint8_t>(rng.next()), static_cast<std::uint8_t>(rng.next()),
                           static_cast<std::uint8_t>(rng.next())});
    return img;
}

// Counts runs of consecutive non-line pixels along one axis.
int count_cells(const std::vector<bool>& mask)
{
    int cells = 0;
    bool in_cell = false;
    for (bool m : mask) {
        if (!m && !in_cell)
            ++cells;
        in_cell = !m;
    }
    return cells;
}

} // namespace

TEST(GridLines, PositionsFor1000By50)
{
    auto p = grid_line_positions(1000, 50);
    ASSERT_EQ(p.size(), 49u);
    for (int i = 0; i < 49; ++i)
        EXPECT_EQ(p[i], 20 * (i + 1));
}

TEST(GridLines, PositionsRoundHalfUp)
{
    EXPECT_EQ(grid_line_positions(100, 2), std::vector<int>{50});
    EXPECT_EQ(grid_line_positions(5, 2), std::vector<int>{3});   // 2.5 -> 3
    EXPECT_EQ(grid_line_positions(7, 4), (std::vector<int>{2, 4, 5})); // 1.75, 3.5, 5.25
}

TEST(GridLines, DefaultGridHas2500Cells)
{
    for (auto [w, h] : {std::pair{1000, 1000}, std::pair{800, 600}, std::pair{1200, 700}}) {
        auto cols = grid_line_mask(w, 50, 1);
        auto rows = grid_line_mask(h, 50, 1);
        EXPECT_EQ(count_cells(cols) * count_cells(rows), 2500) << w << "x" << h;
    }
}

TEST(GridLines, RejectsBadArguments)
{
    EXPECT_THROW(grid_line_positions(50, 50), ConfigError);
    EXPECT_THROW(grid_line_positions(100, 1), ConfigError);
}

TEST(Blend, TwentyPercentBlackOnWhite)
{
    EXPECT_EQ(blend(colors::white, colors::black, 0.2), (Rgb{204, 204, 204}));
    EXPECT_EQ(blend({10, 20, 30}, {200, 100, 0}, 1.0), (Rgb{200, 100, 0}));
    EXPECT_EQ(blend_channel(1, 0, 0.5), 1); // 0.5 rounds up
}

TEST(ApplyGrid, WhiteImageChangesOnlyLinePixels)
{
    RasterImage white(1000, 1000);
    auto out = apply_grid(white, {});
    std::set<int> lines;
    for (int i = 1; i < 50; ++i)
        lines.insert(20 * i);
    for (int y = 0; y < 1000; ++y)
        for (int x = 0; x < 1000; ++x) {
            bool on = lines.count(x) || lines.count(y);
            EXPECT_EQ(out.at(x, y), (on ? Rgb{204, 204, 204} : colors::white)) << x << "," << y;
        }
    EXPECT_EQ(out.at(0, 0), colors::white);
}

TEST(ApplyGrid, PixelExactOnArbitraryImages)
{
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Rng rng(seed + 100);
        int w = rng.uniform_int(40, 300);
        int h = rng.uniform_int(40, 300);
        GridConfig cfg;
        cfg.cells_per_axis = rng.uniform_int(2, std::min(w, h) / 2);
        cfg.opacity = rng.uniform(0.05, 1.0);
        cfg.color = {static_cast<std::uint8_t>(rng.next()), 0, 255};
        cfg.thickness_px = rng.uniform_int(1, 3);
        auto img = noise_image(w, h, seed);
        const auto before = img;
        auto out = apply_grid(img, cfg);
        EXPECT_EQ(img, before);
        auto cols = grid_line_mask(w, cfg.cells_per_axis, cfg.thickness_px);
        auto rows = grid_line_mask(h, cfg.cells_per_axis, cfg.thickness_px);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                auto expect = (rows[y] || cols[x]) ? blend(img.at(x, y), cfg.color, cfg.opacity) : img.at(x, y);
                ASSERT_EQ(out.at(x, y), expect);
            }
    }
}

TEST(ApplyGrid, ThicknessWidensLines)
{
    auto mask = grid_line_mask(100, 4, 3);
    // Lines at 25, 50, 75, each covering p-1..p+1.
    for (int p : {25, 50, 75})
        for (int d = -1; d <= 1; ++d)
            EXPECT_TRUE(mask[p + d]);
    EXPECT_EQ(std::count(mask.begin(), mask.end(), true), 9);
}

TEST(ApplyGrid, TooDenseIsConfigError)
{
    GridConfig cfg;
    cfg.cells_per_axis = 60;
    EXPECT_THROW(apply_grid(RasterImage(100, 100), cfg), ConfigError);
    cfg.cells_per_axis = 50;
    cfg.opacity = 0.0;
    EXPECT_THROW(apply_grid(RasterImage(100, 100), cfg), ConfigError);
}

TEST(SweepGrids, OneOverlayPerDensity)
{
    auto img = noise_image(400, 300, 1);
    auto out = sweep_grids(img, {25, 50, 100}, {});
    ASSERT_EQ(out.size(), 3u);
    for (auto& [d, o] : out) {
        GridConfig c;
        c.cells_per_axis = d;
        EXPECT_EQ(o, apply_grid(img, c));
    }
    EXPECT_TRUE(sweep_grids(img, {}, {}).empty());
}

TEST(SweepGrids, InvalidDensityNamedBeforeAnyWork)
{
    auto img = noise_image(300, 300, 1);
    try {
        sweep_grids(img, {25, 200, 50}, {});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("200"), std::string::npos);
    }
}

TEST(HexColor, RoundTrip)
{
    EXPECT_EQ(parse_hex_color("#ff8000"), (Rgb{255, 128, 0}));
    EXPECT_EQ(to_hex({1, 2, 255}), "0102ff");
    EXPECT_EQ(parse_hex_color(to_hex({9, 200, 31})), (Rgb{9, 200, 31}));
    EXPECT_THROW(parse_hex_color("red"), ConfigError);
}
