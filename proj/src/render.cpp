// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/render.hpp"

#include <cmath>

#include "raster.hpp"

namespace eigengs {

std::vector<PlanarImage> render_components(const EigenGaussianModel& model, ComponentSubset subset,
                                           const RenderOptions& options, ColorSpace space) {
    const BasisShape& shape = model.shape;
    const int C = shape.channels;
    if (space != ColorSpace::Linear && C != 3) space = ColorSpace::Linear;

    const auto [g0, g1] = model.gaussian_range(subset);
    const auto [j0, j1] = model.component_range(subset);
    const std::size_t nf = static_cast<std::size_t>(j1 - j0) * C;
    const std::size_t pixels = static_cast<std::size_t>(shape.width) * shape.height;

    std::vector<double> acc(pixels * nf, 0.0);
    if (nf > 0) {
        const auto splats = detail::make_splats(model.geometry, shape.width, shape.height, options.sigma_cut);
        const auto grid = detail::bin_splats(splats, g0, g1, shape.width, shape.height, options.tile_size);
        const detail::FeatureView view{model.weights.data(), model.features(), static_cast<std::size_t>(j0) * C, nf};
        detail::rasterize(splats, grid, view, shape.width, shape.height, options.sigma_cut, acc.data());
    }

    std::vector<PlanarImage> out;
    out.reserve(shape.k);
    for (int j = 0; j < shape.k; ++j) {
        PlanarImage img(shape.width, shape.height, C, space);
        if (j >= j0 && j < j1) {
            auto dst = img.data();
            const std::size_t base = static_cast<std::size_t>(j - j0) * C;
            for (std::size_t p = 0; p < pixels; ++p) {
                for (int c = 0; c < C; ++c) dst[p * C + c] = static_cast<float>(acc[p * nf + base + c]);
            }
        }
        out.push_back(std::move(img));
    }
    return out;
}

PlanarImage render_image(const ImageGaussianSet& set, const RenderOptions& options) {
    const PlanarImage& mean = set.mean_ref;
    const std::size_t C = static_cast<std::size_t>(mean.channels());
    auto mean_px = mean.data();
    std::vector<double> acc(mean_px.begin(), mean_px.end());

    const auto splats = detail::make_splats(set.geometry, mean.width(), mean.height(), options.sigma_cut);
    const auto grid = detail::bin_splats(splats, 0, splats.size(), mean.width(), mean.height(), options.tile_size);
    const detail::FeatureView view{set.weights.data(), C, 0, C};
    detail::rasterize(splats, grid, view, mean.width(), mean.height(), options.sigma_cut, acc.data());

    PlanarImage out = mean;
    auto dst = out.data();
    for (std::size_t i = 0; i < acc.size(); ++i) dst[i] = static_cast<float>(acc[i]);
    return out;
}

std::vector<float> gaussian_radii(const GaussianGeometry& geometry) {
    std::vector<float> radii(geometry.count());
    for (std::size_t n = 0; n < radii.size(); ++n) {
        const auto cov = covariance_from_factor(std::span<const float, 3>(geometry.fac_raw.data() + 3 * n, 3));
        const double half_trace = 0.5 * (cov[0] + cov[2]);
        const double diff = 0.5 * (cov[0] - cov[2]);
        const double largest = half_trace + std::sqrt(diff * diff + cov[1] * cov[1]);
        radii[n] = static_cast<float>(std::sqrt(largest));
    }
    return radii;
}

} // namespace eigengs
