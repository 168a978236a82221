#pragma once

#include <png.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "chartgrid/errors.hpp"
#include "chartgrid/raster.hpp"

namespace chartgrid::png {

namespace detail {

struct WriteState {
    std::vector<std::uint8_t>* out;
};

inline void write_cb(png_structp png, png_bytep data, png_size_t len)
{
    auto* st = static_cast<WriteState*>(png_get_io_ptr(png));
    st->out->insert(st->out->end(), data, data + len);
}

inline void flush_cb(png_structp) {}

struct ReadState {
    std::span<const std::uint8_t> in;
    std::size_t pos = 0;
};

inline void read_cb(png_structp png, png_bytep data, png_size_t len)
{
    auto* st = static_cast<ReadState*>(png_get_io_ptr(png));
    if (st->pos + len > st->in.size())
        png_error(png, "unexpected end of PNG data");
    std::memcpy(data, st->in.data() + st->pos, len);
    st->pos += len;
}

[[noreturn]] inline void error_cb(png_structp png, png_const_charp msg)
{
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err)
        *err = msg;
    png_longjmp(png, 1);
}

inline void warning_cb(png_structp, png_const_charp) {}

} // namespace detail

/// Encodes as 8-bit RGB without ancillary chunks, so equal pixels give equal bytes.
inline std::vector<std::uint8_t> encode(const RasterImage& img)
{
    if (img.empty())
        throw IoError("cannot encode an empty image");
    std::vector<std::uint8_t> out;
    std::string err;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, detail::error_cb, detail::warning_cb);
    if (!png)
        throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    detail::WriteState st{&out};
    std::vector<png_bytep> rows(img.height());
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + err);
    }
    png_set_write_fn(png, &st, detail::write_cb, detail::flush_cb);
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    auto* base = const_cast<std::uint8_t*>(img.bytes().data());
    for (int y = 0; y < img.height(); ++y)
        rows[y] = base + static_cast<std::size_t>(y) * img.width() * 3;
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

/// Decodes any PNG flavour to 8-bit RGB (alpha dropped, palette and gray expanded).
inline RasterImage decode(std::span<const std::uint8_t> data)
{
    if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0)
        throw ParseError("not a PNG file");
    std::string err;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, detail::error_cb, detail::warning_cb);
    if (!png)
        throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    detail::ReadState st{data, 0};
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("PNG decode failed: " + err);
    }
    png_set_read_fn(png, &st, detail::read_cb);
    png_read_info(png, info);
    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    int color_type = png_get_color_type(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16)
        png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA)
        png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_read_update_info(png, info);
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3)
        png_error(png, "unsupported PNG layout");
    pixels.resize(static_cast<std::size_t>(width) * height * 3);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return RasterImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

inline void write_file(const std::filesystem::path& path, const RasterImage& img)
{
    auto bytes = encode(img);
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os)
        throw IoError("write failed: " + path.string());
}

inline RasterImage read_file(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode(bytes);
}

} // namespace chartgrid::png
