// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/color.hpp"

#include <algorithm>
#include <array>

#include "eigengs/error.hpp"

namespace eigengs {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Rows: Y, Cb, Cr. Inputs and outputs scaled to [0,1].
constexpr Mat3 kForward = {{
    {65.481 / 255.0, 128.553 / 255.0, 24.966 / 255.0},
    {-37.797 / 255.0, -74.203 / 255.0, 112.0 / 255.0},
    {112.0 / 255.0, -93.786 / 255.0, -18.214 / 255.0},
}};
constexpr std::array<double, 3> kOffset = {16.0 / 255.0, 128.0 / 255.0, 128.0 / 255.0};

Mat3 invert(const Mat3& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

const Mat3& inverse_matrix() {
    static const Mat3 inv = invert(kForward);
    return inv;
}

void require_three(const PlanarImage& img) {
    if (img.channels() != 3) {
        throw Error(ErrorKind::ChannelMismatch, "expected a 3-channel image");
    }
}

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

} // namespace

PlanarImage rgb_to_ycbcr(const PlanarImage& img) {
    require_three(img);
    if (img.space() != ColorSpace::RGB) {
        throw Error(ErrorKind::ChannelMismatch, "rgb_to_ycbcr expects an RGB image");
    }
    PlanarImage out(img.width(), img.height(), 3, ColorSpace::YCbCr);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); i += 3) {
        const double r = src[i], g = src[i + 1], b = src[i + 2];
        for (int row = 0; row < 3; ++row) {
            dst[i + row] = static_cast<float>(kOffset[row] + kForward[row][0] * r + kForward[row][1] * g +
                                              kForward[row][2] * b);
        }
    }
    return out;
}

PlanarImage ycbcr_to_rgb(const PlanarImage& img) {
    require_three(img);
    if (img.space() != ColorSpace::YCbCr) {
        throw Error(ErrorKind::ChannelMismatch, "ycbcr_to_rgb expects a YCbCr image");
    }
    const Mat3& inv = inverse_matrix();
    PlanarImage out(img.width(), img.height(), 3, ColorSpace::RGB);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); i += 3) {
        const double y = src[i] - kOffset[0];
        const double cb = src[i + 1] - kOffset[1];
        const double cr = src[i + 2] - kOffset[2];
        for (int row = 0; row < 3; ++row) {
            dst[i + row] = clamp01(inv[row][0] * y + inv[row][1] * cb + inv[row][2] * cr);
        }
    }
    return out;
}

PlanarImage to_display(const PlanarImage& img) {
    if (img.space() == ColorSpace::YCbCr) {
        return ycbcr_to_rgb(img);
    }
    PlanarImage out = img;
    for (float& v : out.data()) {
        v = clamp01(v);
    }
    return out;
}

PlanarImage from_rgb(const PlanarImage& rgb, ColorSpace space) {
    switch (space) {
    case ColorSpace::RGB: return rgb;
    case ColorSpace::YCbCr: return rgb_to_ycbcr(rgb);
    case ColorSpace::Linear: return rgb.channels() == 1 ? rgb : luma(rgb);
    }
    return rgb;
}

PlanarImage luma(const PlanarImage& rgb) {
    require_three(rgb);
    PlanarImage out(rgb.width(), rgb.height(), 1, ColorSpace::Linear);
    auto src = rgb.data();
    auto dst = out.data();
    for (std::size_t p = 0; p < dst.size(); ++p) {
        dst[p] = static_cast<float>(0.299 * src[3 * p] + 0.587 * src[3 * p + 1] + 0.114 * src[3 * p + 2]);
    }
    return out;
}

} // namespace eigengs
