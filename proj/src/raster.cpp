// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "raster.hpp"

#include <algorithm>
#include <cmath>

#include "eigengs/parallel.hpp"

namespace eigengs::detail {

namespace {

// Widening applied to bounding boxes so that round-off never drops a pixel
// whose sigma sits exactly on the cutoff.
constexpr double kBoundsSlack = 1e-6;

struct TileRect {
    int x0, x1, y0, y1; // half-open
};

TileRect tile_rect(const TileGrid& grid, std::size_t t, int width, int height) {
    const int tx = static_cast<int>(t % grid.tiles_x);
    const int ty = static_cast<int>(t / grid.tiles_x);
    return {tx * grid.tile, std::min((tx + 1) * grid.tile, width), ty * grid.tile,
            std::min((ty + 1) * grid.tile, height)};
}

} // namespace

std::vector<Splat> make_splats(const GaussianGeometry& geometry, int width, int height, double sigma_cut) {
    const std::size_t n = geometry.count();
    std::vector<Splat> splats(n);
    for (std::size_t i = 0; i < n; ++i) {
        Splat& s = splats[i];
        const double sx = 1.0 / (1.0 + std::exp(-static_cast<double>(geometry.pos_raw[2 * i])));
        const double sy = 1.0 / (1.0 + std::exp(-static_cast<double>(geometry.pos_raw[2 * i + 1])));
        s.mx = sx * width;
        s.my = sy * height;
        s.dmx = width * sx * (1.0 - sx);
        s.dmy = height * sy * (1.0 - sy);
        s.l00 = std::exp(static_cast<double>(geometry.fac_raw[3 * i]));
        s.l10 = geometry.fac_raw[3 * i + 1];
        s.l11 = std::exp(static_cast<double>(geometry.fac_raw[3 * i + 2]));

        // Sigma = (L L^T)^-1; the cutoff ellipse spans sqrt(2 cut Sigma_ii).
        const double det = s.l00 * s.l11;
        const double cov_xx = (s.l10 * s.l10 + s.l11 * s.l11) / (det * det);
        const double cov_yy = (s.l00 * s.l00) / (det * det);
        const double rx = std::sqrt(2.0 * sigma_cut * cov_xx) * (1.0 + kBoundsSlack) + kBoundsSlack;
        const double ry = std::sqrt(2.0 * sigma_cut * cov_yy) * (1.0 + kBoundsSlack) + kBoundsSlack;
        if (!std::isfinite(rx) || !std::isfinite(ry)) {
            s.x0 = 0, s.x1 = width - 1, s.y0 = 0, s.y1 = height - 1;
            continue;
        }
        // Pixel x is sampled at x + 0.5.
        s.x0 = static_cast<int>(std::max(std::ceil(s.mx - rx - 0.5), 0.0));
        s.x1 = static_cast<int>(std::min(std::floor(s.mx + rx - 0.5), width - 1.0));
        s.y0 = static_cast<int>(std::max(std::ceil(s.my - ry - 0.5), 0.0));
        s.y1 = static_cast<int>(std::min(std::floor(s.my + ry - 0.5), height - 1.0));
    }
    return splats;
}

TileGrid bin_splats(const std::vector<Splat>& splats, std::size_t g0, std::size_t g1, int width, int height,
                    int tile) {
    TileGrid grid;
    grid.tile = tile;
    grid.tiles_x = (width + tile - 1) / tile;
    grid.tiles_y = (height + tile - 1) / tile;
    grid.lists.resize(static_cast<std::size_t>(grid.tiles_x) * grid.tiles_y);
    for (std::size_t n = g0; n < g1; ++n) {
        const Splat& s = splats[n];
        if (s.empty()) continue;
        for (int ty = s.y0 / tile; ty <= s.y1 / tile; ++ty) {
            for (int tx = s.x0 / tile; tx <= s.x1 / tile; ++tx) {
                grid.lists[static_cast<std::size_t>(ty) * grid.tiles_x + tx].push_back(static_cast<std::uint32_t>(n));
            }
        }
    }
    return grid;
}

void rasterize(const std::vector<Splat>& splats, const TileGrid& grid, const FeatureView& features, int width,
               int height, double sigma_cut, double* out) {
    const std::size_t nf = features.count;
    parallel_for(grid.lists.size(), [&](std::size_t t) {
        const auto& list = grid.lists[t];
        if (list.empty()) return;
        const TileRect r = tile_rect(grid, t, width, height);
        for (int y = r.y0; y < r.y1; ++y) {
            const double py = y + 0.5;
            for (int x = r.x0; x < r.x1; ++x) {
                const double px = x + 0.5;
                double* pix = out + (static_cast<std::size_t>(y) * width + x) * nf;
                for (const std::uint32_t n : list) {
                    const Splat& s = splats[n];
                    if (x < s.x0 || x > s.x1 || y < s.y0 || y > s.y1) continue;
                    const double dx = px - s.mx;
                    const double dy = py - s.my;
                    const double u0 = s.l00 * dx + s.l10 * dy;
                    const double u1 = s.l11 * dy;
                    const double sigma = 0.5 * (u0 * u0 + u1 * u1);
                    if (sigma > sigma_cut) continue;
                    const double g = std::exp(-sigma);
                    const float* w = features.weights + n * features.stride + features.offset;
                    for (std::size_t f = 0; f < nf; ++f) pix[f] += w[f] * g;
                }
            }
        }
    });
}

SplatGrads rasterize_backward(const std::vector<Splat>& splats, const TileGrid& grid, const FeatureView& features,
                              int width, int height, double sigma_cut, const double* d_out) {
    const std::size_t nf = features.count;
    const std::size_t row = 5 + nf; // mx, my, a, b, c, weights...
    std::vector<std::vector<double>> partial(grid.lists.size());

    parallel_for(grid.lists.size(), [&](std::size_t t) {
        const auto& list = grid.lists[t];
        if (list.empty()) return;
        auto& acc = partial[t];
        acc.assign(list.size() * row, 0.0);
        const TileRect r = tile_rect(grid, t, width, height);
        for (int y = r.y0; y < r.y1; ++y) {
            const double py = y + 0.5;
            for (int x = r.x0; x < r.x1; ++x) {
                const double px = x + 0.5;
                const double* grad = d_out + (static_cast<std::size_t>(y) * width + x) * nf;
                for (std::size_t li = 0; li < list.size(); ++li) {
                    const std::uint32_t n = list[li];
                    const Splat& s = splats[n];
                    if (x < s.x0 || x > s.x1 || y < s.y0 || y > s.y1) continue;
                    const double dx = px - s.mx;
                    const double dy = py - s.my;
                    const double u0 = s.l00 * dx + s.l10 * dy;
                    const double u1 = s.l11 * dy;
                    const double sigma = 0.5 * (u0 * u0 + u1 * u1);
                    if (sigma > sigma_cut) continue;
                    const double g = std::exp(-sigma);
                    const float* w = features.weights + n * features.stride + features.offset;
                    double* a = acc.data() + li * row;
                    double dot = 0.0;
                    for (std::size_t f = 0; f < nf; ++f) {
                        dot += w[f] * grad[f];
                        a[5 + f] += grad[f] * g;
                    }
                    const double d_sigma = -g * dot;
                    a[0] -= d_sigma * u0 * s.l00;
                    a[1] -= d_sigma * (u0 * s.l10 + u1 * s.l11);
                    a[2] += d_sigma * u0 * s.l00 * dx;
                    a[3] += d_sigma * u0 * dy;
                    a[4] += d_sigma * u1 * s.l11 * dy;
                }
            }
        }
    });

    const std::size_t n_total = splats.size();
    SplatGrads out;
    out.pos.assign(n_total * 2, 0.0);
    out.fac.assign(n_total * 3, 0.0);
    out.weights.assign(n_total * features.stride, 0.0);
    for (std::size_t t = 0; t < grid.lists.size(); ++t) {
        const auto& list = grid.lists[t];
        if (list.empty()) continue;
        const auto& acc = partial[t];
        for (std::size_t li = 0; li < list.size(); ++li) {
            const std::uint32_t n = list[li];
            const double* a = acc.data() + li * row;
            out.pos[2 * n] += a[0];
            out.pos[2 * n + 1] += a[1];
            for (int i = 0; i < 3; ++i) out.fac[3 * n + i] += a[2 + i];
            double* dw = out.weights.data() + n * features.stride + features.offset;
            for (std::size_t f = 0; f < nf; ++f) dw[f] += a[5 + f];
        }
    }
    for (std::size_t n = 0; n < n_total; ++n) {
        out.pos[2 * n] *= splats[n].dmx;
        out.pos[2 * n + 1] *= splats[n].dmy;
    }
    return out;
}

} // namespace eigengs::detail
