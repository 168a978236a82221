#include <gtest/gtest.h>

#include "chartgrid/dataset.hpp"
#include "chartgrid/png.hpp"
#include "chartgrid/render.hpp"
#include "chartgrid/rng.hpp"

using namespace chartgrid;

namespace {

ChartGroundTruth simple_chart(int w, int h, ColorMode mode = ColorMode::color)
{
    ChartGroundTruth gt;
    gt.id = "c";
    gt.title = "Test";
    SignalSpec spec;
    spec.x_max = 10.0;
    gt.series.push_back(generate_series(spec, 100, 1, "A"));
    spec.offset = 0.5;
    gt.series.push_back(generate_series(spec, 100, 1, "B"));
    gt.x_axis = {"x", std::nullopt, -0.5, 10.5};
    gt.y_axis = {"y", "m", -1.2, 1.7};
    gt.style.width_px = w;
    gt.style.height_px = h;
    gt.style.color_mode = mode;
    return gt;
}

} // namespace

TEST(RenderChart, ImageMatchesStyleDimensions)
{
    auto r = render_chart(simple_chart(800, 600));
    EXPECT_EQ(r.image.width(), 800);
    EXPECT_EQ(r.image.height(), 600);
    EXPECT_EQ(r.image.bytes().size(), 800u * 600u * 3u);
}

TEST(RenderChart, AxisMinimumMapsToBottomLeftCorner)
{
    auto gt = simple_chart(800, 600);
    auto g = render_chart(gt).geometry;
    auto [px, py] = g.to_pixel(gt.x_axis.min, gt.y_axis.min);
    EXPECT_NEAR(px, g.left, 1);
    EXPECT_NEAR(py, g.bottom, 1);
    auto [qx, qy] = g.to_pixel(gt.x_axis.max, gt.y_axis.max);
    EXPECT_NEAR(qx, g.right, 1);
    EXPECT_NEAR(qy, g.top, 1);
}

TEST(RenderChart, EveryGroundTruthPointLandsInsidePlotArea)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (const auto& gt : build_dataset({}, seed)) {
            auto r = render_chart(gt);
            const auto& g = r.geometry;
            EXPECT_LE(std::max(r.image.width(), r.image.height()), max_image_dimension);
            for (const auto& s : gt.series) {
                for (const auto& p : s.points) {
                    auto [px, py] = g.to_pixel(p.x, p.y);
                    ASSERT_TRUE(g.strictly_inside(px, py)) << gt.id << " " << p.x << "," << p.y;
                    // Inverse of the rounded pixel is within half a pixel in data units.
                    auto back = g.inverse(px, py);
                    EXPECT_LE(std::abs(back.x - p.x), 0.5 / g.x_scale() + 1e-9);
                    EXPECT_LE(std::abs(back.y - p.y), 0.5 / g.y_scale() + 1e-9);
                }
            }
        }
    }
}

TEST(RenderChart, MonochromeUsesNoColor)
{
    auto r = render_chart(simple_chart(800, 600, ColorMode::monochrome));
    bool any_dark = false;
    for (int y = 0; y < r.image.height(); ++y)
        for (int x = 0; x < r.image.width(); ++x) {
            auto c = r.image.at(x, y);
            ASSERT_TRUE(c.r == c.g && c.g == c.b);
            any_dark |= c.r < 100;
        }
    EXPECT_TRUE(any_dark);
}

TEST(RenderChart, ColorModeDrawsPaletteColors)
{
    auto r = render_chart(simple_chart(800, 600));
    int colored = 0;
    for (int y = 0; y < r.image.height(); ++y)
        for (int x = 0; x < r.image.width(); ++x) {
            auto c = r.image.at(x, y);
            colored += (c.r != c.g || c.g != c.b) ? 1 : 0;
        }
    EXPECT_GT(colored, 200);
}

TEST(RenderChart, DeterministicPixels)
{
    auto charts = build_dataset({}, 5);
    for (const auto& gt : charts)
        EXPECT_EQ(render_chart(gt).image, render_chart(gt).image);
}

TEST(RenderChart, DegenerateAxisIsRenderError)
{
    auto gt = simple_chart(800, 600);
    gt.y_axis.max = gt.y_axis.min;
    EXPECT_THROW(render_chart(gt), RenderError);
    gt = simple_chart(1300, 600);
    EXPECT_THROW(render_chart(gt), RenderError);
}

TEST(Png, RoundTripPreservesPixels)
{
    RasterImage img(37, 23);
    Rng rng(4);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            img.set(x, y, {static_cast<std::uint8_t>(rng.next()), static_cast<std::uint8_t>(rng.next()),
                           static_cast<std::uint8_t>(rng.next())});
    auto bytes = png::encode(img);
    EXPECT_EQ(png::decode(bytes), img);
    EXPECT_EQ(png::encode(img), bytes);
}

TEST(Png, GarbageIsParseError)
{
    std::vector<std::uint8_t> junk{1, 2, 3, 4, 5, 6, 7, 8, 9};
    EXPECT_THROW(png::decode(junk), ParseError);
    auto bytes = png::encode(RasterImage(10, 10));
    bytes.resize(bytes.size() / 2);
    EXPECT_THROW(png::decode(bytes), ParseError);
}

TEST(RasterImage, RejectsMismatchedBuffer)
{
    EXPECT_THROW(RasterImage(2, 2, std::vector<std::uint8_t>(11)), RenderError);
    EXPECT_THROW(RasterImage(0, 2), RenderError);
}
