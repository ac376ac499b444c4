// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace eigengs {

PlanarImage synthetic_image(const SyntheticSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int w = spec.width;
    const int h = spec.height;
    const double size = std::min(w, h);

    std::array<double, 3> c0{}, c1{};
    for (int c = 0; c < 3; ++c) {
        c0[c] = 0.15 + 0.7 * unit(rng);
        c1[c] = 0.15 + 0.7 * unit(rng);
    }
    const double angle = 2.0 * M_PI * unit(rng);
    const double gx = std::cos(angle), gy = std::sin(angle);

    struct Blob {
        double x, y, sx, sy, rot;
        std::array<double, 3> color;
    };
    std::uniform_int_distribution<int> blob_count(spec.min_blobs, spec.max_blobs);
    std::vector<Blob> blobs(blob_count(rng));
    for (auto& b : blobs) {
        b.x = w * (0.1 + 0.8 * unit(rng));
        b.y = h * (0.1 + 0.8 * unit(rng));
        b.sx = size * (spec.min_sigma + (spec.max_sigma - spec.min_sigma) * unit(rng));
        b.sy = size * (spec.min_sigma + (spec.max_sigma - spec.min_sigma) * unit(rng));
        b.rot = M_PI * unit(rng);
        for (int c = 0; c < 3; ++c) b.color[c] = 1.2 * unit(rng) - 0.6;
    }

    PlanarImage img(w, h, 3, ColorSpace::RGB);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = (x + 0.5) / w - 0.5;
            const double v = (y + 0.5) / h - 0.5;
            const double t = std::clamp(0.5 + (u * gx + v * gy), 0.0, 1.0);
            std::array<double, 3> px{};
            for (int c = 0; c < 3; ++c) px[c] = (1 - t) * c0[c] + t * c1[c];
            for (const auto& b : blobs) {
                const double dx = x + 0.5 - b.x, dy = y + 0.5 - b.y;
                const double cr = std::cos(b.rot), sr = std::sin(b.rot);
                const double rx = (cr * dx + sr * dy) / b.sx;
                const double ry = (-sr * dx + cr * dy) / b.sy;
                const double g = std::exp(-0.5 * (rx * rx + ry * ry));
                for (int c = 0; c < 3; ++c) px[c] += b.color[c] * g;
            }
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<float>(std::clamp(px[c], 0.0, 1.0));
        }
    }
    return img;
}

std::vector<PlanarImage> synthetic_images(const SyntheticSpec& spec, std::size_t count, std::uint64_t seed) {
    std::vector<PlanarImage> out;
    out.reserve(count);
    std::mt19937_64 seeds(seed);
    for (std::size_t i = 0; i < count; ++i) out.push_back(synthetic_image(spec, seeds()));
    return out;
}

} // namespace eigengs
