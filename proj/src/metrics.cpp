// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "eigengs/color.hpp"
#include "eigengs/error.hpp"

namespace eigengs {

namespace {

constexpr int kRadius = 5; // 11 x 11 window
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

void require_same(const PlanarImage& a, const PlanarImage& b) {
    if (!(a.shape() == b.shape())) {
        throw Error(ErrorKind::ShapeError, "images differ in shape");
    }
}

const std::array<double, 2 * kRadius + 1>& window() {
    static const auto w = [] {
        std::array<double, 2 * kRadius + 1> k{};
        double sum = 0.0;
        for (int i = -kRadius; i <= kRadius; ++i) {
            k[i + kRadius] = std::exp(-(i * i) / (2.0 * kSigma * kSigma));
            sum += k[i + kRadius];
        }
        for (double& v : k) v /= sum;
        return k;
    }();
    return w;
}

// Symmetric (half-sample) reflection: ... c b a | a b c ... | c b a.
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

std::vector<double> blur(const std::vector<double>& src, int width, int height) {
    const auto& k = window();
    std::vector<double> tmp(src.size()), out(src.size());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double s = 0.0;
            for (int i = -kRadius; i <= kRadius; ++i) s += k[i + kRadius] * src[y * width + reflect(x + i, width)];
            tmp[y * width + x] = s;
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double s = 0.0;
            for (int i = -kRadius; i <= kRadius; ++i) s += k[i + kRadius] * tmp[reflect(y + i, height) * width + x];
            out[y * width + x] = s;
        }
    }
    return out;
}

std::vector<double> intensity(const PlanarImage& img) {
    std::vector<double> out(img.shape().pixels());
    auto px = img.data();
    if (img.channels() == 1) {
        for (std::size_t p = 0; p < out.size(); ++p) out[p] = px[p];
    } else {
        for (std::size_t p = 0; p < out.size(); ++p) {
            out[p] = 0.299 * px[3 * p] + 0.587 * px[3 * p + 1] + 0.114 * px[3 * p + 2];
        }
    }
    return out;
}

} // namespace

double mse(const PlanarImage& a, const PlanarImage& b) {
    require_same(a, b);
    auto pa = a.data();
    auto pb = b.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - pb[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pa.size());
}

double psnr_from_mse(double value) {
    if (value <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / value);
}

double psnr_raw(const PlanarImage& a, const PlanarImage& b) { return psnr_from_mse(mse(a, b)); }

double ssim_raw(const PlanarImage& a, const PlanarImage& b) {
    require_same(a, b);
    const int w = a.width();
    const int h = a.height();
    const auto x = intensity(a);
    const auto y = intensity(b);
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = blur(x, w, h);
    const auto my = blur(y, w, h);
    const auto sxx = blur(xx, w, h);
    const auto syy = blur(yy, w, h);
    const auto sxy = blur(xy, w, h);

    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double var_x = sxx[i] - mx[i] * mx[i];
        const double var_y = syy[i] - my[i] * my[i];
        const double cov = sxy[i] - mx[i] * my[i];
        const double num = (2.0 * mx[i] * my[i] + kC1) * (2.0 * cov + kC2);
        const double den = (mx[i] * mx[i] + my[i] * my[i] + kC1) * (var_x + var_y + kC2);
        total += num / den;
    }
    return total / static_cast<double>(x.size());
}

double psnr(const PlanarImage& a, const PlanarImage& b) {
    require_same(a, b);
    return psnr_raw(to_display(a), to_display(b));
}

double ssim(const PlanarImage& a, const PlanarImage& b) {
    require_same(a, b);
    return ssim_raw(to_display(a), to_display(b));
}

QualityScore quality(const PlanarImage& a, const PlanarImage& b) {
    require_same(a, b);
    const PlanarImage da = to_display(a);
    const PlanarImage db = to_display(b);
    return {psnr_raw(da, db), ssim_raw(da, db)};
}

} // namespace eigengs
