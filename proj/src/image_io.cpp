// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "eigengs/color.hpp"
#include "eigengs/error.hpp"

namespace eigengs {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    return f;
}

} // namespace

PlanarImage read_png(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw Error(ErrorKind::IoError, path.string() + " is not a PNG file");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorKind::IoError, "libpng initialization failed");
    }

    // libpng reports errors by longjmp; everything owned past this point is
    // either a libpng struct or the pixel vector, both released below.
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0, height = 0;
    int bit_depth = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorKind::IoError, "failed to decode " + path.string());
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    if (png_get_bit_depth(png, info) == 16) png_set_swap(png); // host order on little-endian
    png_read_update_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    bit_depth = png_get_bit_depth(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    pixels.resize(rowbytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = pixels.data() + y * rowbytes;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    PlanarImage img(static_cast<int>(width), static_cast<int>(height), 3, ColorSpace::RGB);
    auto dst = img.data();
    if (bit_depth == 16) {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            const unsigned v = pixels[2 * i] | (static_cast<unsigned>(pixels[2 * i + 1]) << 8);
            dst[i] = static_cast<float>(v / 65535.0);
        }
    } else {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = static_cast<float>(pixels[i] / 255.0);
        }
    }
    return img;
}

void write_png(const std::filesystem::path& path, const PlanarImage& img) {
    const PlanarImage display = to_display(img);
    const int channels = display.channels();
    std::vector<unsigned char> bytes(display.size());
    auto src = display.data();
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<unsigned char>(std::floor(src[i] * 255.0 + 0.5));
    }

    FilePtr file = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::IoError, "libpng initialization failed");
    }
    std::vector<png_bytep> rows(display.height());
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::IoError, "failed to write " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, display.width(), display.height(), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    for (int y = 0; y < display.height(); ++y) {
        rows[y] = bytes.data() + static_cast<std::size_t>(y) * display.width() * channels;
    }
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

PlanarImage resize_bilinear(const PlanarImage& img, int width, int height) {
    if (width == img.width() && height == img.height()) {
        return img;
    }
    PlanarImage out(width, height, img.channels(), img.space());
    const double sx = static_cast<double>(img.width()) / width;
    const double sy = static_cast<double>(img.height()) / height;
    const int C = img.channels();
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double ty = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double tx = fx - x0;
            for (int c = 0; c < C; ++c) {
                const double top = (1 - tx) * img.at(x0, y0, c) + tx * img.at(x1, y0, c);
                const double bottom = (1 - tx) * img.at(x0, y1, c) + tx * img.at(x1, y1, c);
                out.at(x, y, c) = static_cast<float>((1 - ty) * top + ty * bottom);
            }
        }
    }
    return out;
}

} // namespace eigengs
