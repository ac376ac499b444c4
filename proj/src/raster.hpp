// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

// Tile-binned evaluation shared by the forward renderers and the backward
// pass. Internal to the library.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "eigengs/gaussian.hpp"

namespace eigengs::detail {

struct Splat {
    double mx = 0.0, my = 0.0;          // center in pixels
    double l00 = 1.0, l10 = 0.0, l11 = 1.0; // Cholesky-style factor of Sigma^-1
    double dmx = 0.0, dmy = 0.0;        // d center / d pos_raw
    int x0 = 0, x1 = -1, y0 = 0, y1 = -1; // inclusive pixel bounds of the cutoff ellipse

    bool empty() const { return x0 > x1 || y0 > y1; }
};

std::vector<Splat> make_splats(const GaussianGeometry& geometry, int width, int height, double sigma_cut);

struct TileGrid {
    int tile = 16;
    int tiles_x = 0;
    int tiles_y = 0;
    std::vector<std::vector<std::uint32_t>> lists; // ascending Gaussian index per tile
};

/// Bins Gaussians [g0, g1) into tiles by their conservative bounding boxes.
TileGrid bin_splats(const std::vector<Splat>& splats, std::size_t g0, std::size_t g1, int width, int height,
                    int tile);

/// Feature window of a weight tensor: Gaussian n owns weights[n * stride,
/// (n + 1) * stride); only [offset, offset + count) take part.
struct FeatureView {
    const float* weights = nullptr;
    std::size_t stride = 0;
    std::size_t offset = 0;
    std::size_t count = 0;
};

/// out[p * count + f] += sum_n w[n][offset + f] * exp(-sigma_n(p)), with
/// Gaussians summed in ascending index order.
void rasterize(const std::vector<Splat>& splats, const TileGrid& grid, const FeatureView& features, int width,
               int height, double sigma_cut, double* out);

struct SplatGrads {
    std::vector<double> pos;     // N x 2, w.r.t. pos_raw
    std::vector<double> fac;     // N x 3, w.r.t. fac_raw
    std::vector<double> weights; // N x stride, only the feature window filled
};

/// Back-propagates dL/d(out) through rasterize(). Per-tile partial sums are
/// merged in tile order, independent of thread scheduling.
SplatGrads rasterize_backward(const std::vector<Splat>& splats, const TileGrid& grid, const FeatureView& features,
                              int width, int height, double sigma_cut, const double* d_out);

} // namespace eigengs::detail
