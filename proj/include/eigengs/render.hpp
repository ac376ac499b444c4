// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "eigengs/gaussian.hpp"
#include "eigengs/image.hpp"

namespace eigengs {

struct RenderOptions {
    /// A Gaussian contributes nothing where 0.5 * d^T Sigma^-1 d exceeds this.
    double sigma_cut = 9.0;
    int tile_size = 16;
};

/// Renders all k components of an eigen-model, pixel (x,y) sampled at
/// (x+0.5, y+0.5). Components outside the subset come back as zero images.
/// Every returned image uses `space` as its tag.
std::vector<PlanarImage> render_components(const EigenGaussianModel& model,
                                           ComponentSubset subset = ComponentSubset::All,
                                           const RenderOptions& options = {},
                                           ColorSpace space = ColorSpace::Linear);

/// mean_ref + sum_n c'_n exp(-sigma_n), unclamped, in the mean's color space.
PlanarImage render_image(const ImageGaussianSet& set, const RenderOptions& options = {});

/// sqrt of the larger covariance eigenvalue of every Gaussian, in pixels.
std::vector<float> gaussian_radii(const GaussianGeometry& geometry);

} // namespace eigengs
