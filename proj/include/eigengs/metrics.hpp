// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "eigengs/image.hpp"

namespace eigengs {

struct QualityScore {
    double psnr_db = 0.0; // +inf when the images are identical
    double ssim = 0.0;
};

/// PSNR (peak 1.0) and SSIM after mapping both images to clamped display
/// space. These are the numbers reported everywhere.
double psnr(const PlanarImage& a, const PlanarImage& b);
double ssim(const PlanarImage& a, const PlanarImage& b);
QualityScore quality(const PlanarImage& a, const PlanarImage& b);

/// Same formulas on the samples as stored, without any conversion or clamp.
/// For three-channel inputs SSIM runs on BT.601 luma of the raw values.
double psnr_raw(const PlanarImage& a, const PlanarImage& b);
double ssim_raw(const PlanarImage& a, const PlanarImage& b);

double mse(const PlanarImage& a, const PlanarImage& b);
double psnr_from_mse(double mse);

} // namespace eigengs
