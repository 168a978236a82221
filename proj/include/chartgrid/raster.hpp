#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chartgrid/errors.hpp"

namespace chartgrid {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

namespace colors {
inline constexpr Rgb white{255, 255, 255};
inline constexpr Rgb black{0, 0, 0};
} // namespace colors

/// Row-major 8-bit RGB image.
class RasterImage {
public:
    RasterImage() = default;

    RasterImage(int width, int height, Rgb fill = colors::white)
        : width_(width), height_(height)
    {
        if (width <= 0 || height <= 0)
            throw RenderError("image dimensions must be positive");
        pixels_.resize(static_cast<std::size_t>(width) * height * 3);
        for (std::size_t i = 0; i < pixels_.size(); i += 3) {
            pixels_[i] = fill.r;
            pixels_[i + 1] = fill.g;
            pixels_[i + 2] = fill.b;
        }
    }

    RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels))
    {
        if (width <= 0 || height <= 0)
            throw RenderError("image dimensions must be positive");
        if (pixels_.size() != static_cast<std::size_t>(width) * height * 3)
            throw RenderError("pixel buffer length does not match width*height*3");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return pixels_.empty(); }

    std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }

    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    Rgb at(int x, int y) const noexcept
    {
        auto i = offset(x, y);
        return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
    }

    void set(int x, int y, Rgb c) noexcept
    {
        auto i = offset(x, y);
        pixels_[i] = c.r;
        pixels_[i + 1] = c.g;
        pixels_[i + 2] = c.b;
    }

    /// Bounds-checked write; out-of-image coordinates are dropped.
    void plot(int x, int y, Rgb c) noexcept
    {
        if (contains(x, y))
            set(x, y, c);
    }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t offset(int x, int y) const noexcept
    {
        return (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

inline void fill_rect(RasterImage& img, int x0, int y0, int x1, int y1, Rgb c)
{
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, img.width() - 1);
    y1 = std::min(y1, img.height() - 1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            img.set(x, y, c);
}

inline void stroke_rect(RasterImage& img, int x0, int y0, int x1, int y1, Rgb c)
{
    for (int x = x0; x <= x1; ++x) {
        img.plot(x, y0, c);
        img.plot(x, y1, c);
    }
    for (int y = y0; y <= y1; ++y) {
        img.plot(x0, y, c);
        img.plot(x1, y, c);
    }
}

/// On/off run lengths in pixels along the stroke. Empty means solid.
using DashPattern = std::vector<int>;

/// Stateful stroker so dash phase carries across the segments of a polyline.
class Stroker {
public:
    Stroker(RasterImage& img, Rgb color, int thickness, DashPattern dash = {})
        : img_(img), color_(color), thickness_(std::max(thickness, 1)), dash_(std::move(dash))
    {
        for (int v : dash_)
            period_ += v;
    }

    void line(double x0, double y0, double x1, double y1)
    {
        double dx = x1 - x0;
        double dy = y1 - y0;
        double len = std::hypot(dx, dy);
        int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
        double step_len = len / steps;
        for (int i = 0; i <= steps; ++i) {
            double t = static_cast<double>(i) / steps;
            if (pen_down())
                dab(x0 + t * dx, y0 + t * dy);
            if (i < steps)
                travelled_ += step_len;
        }
    }

private:
    bool pen_down() const
    {
        if (period_ <= 0)
            return true;
        double phase = std::fmod(travelled_, static_cast<double>(period_));
        double acc = 0.0;
        for (std::size_t k = 0; k < dash_.size(); ++k) {
            acc += dash_[k];
            if (phase < acc)
                return k % 2 == 0;
        }
        return true;
    }

    void dab(double cx, double cy)
    {
        int x = static_cast<int>(std::lround(cx));
        int y = static_cast<int>(std::lround(cy));
        int lo = -(thickness_ - 1) / 2;
        int hi = lo + thickness_ - 1;
        for (int oy = lo; oy <= hi; ++oy)
            for (int ox = lo; ox <= hi; ++ox)
                img_.plot(x + ox, y + oy, color_);
    }

    RasterImage& img_;
    Rgb color_;
    int thickness_;
    DashPattern dash_;
    int period_ = 0;
    double travelled_ = 0.0;
};

} // namespace chartgrid
