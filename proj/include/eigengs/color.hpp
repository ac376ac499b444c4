// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "eigengs/image.hpp"

namespace eigengs {

// BT.601 studio swing: Y in [16,235]/255, Cb/Cr in [16,240]/255. The forward
// transform does not clamp; out-of-range values pass through untouched.
PlanarImage rgb_to_ycbcr(const PlanarImage& img);

// Exact inverse of rgb_to_ycbcr followed by a clamp to [0,1].
PlanarImage ycbcr_to_rgb(const PlanarImage& img);

/// Converts an image in any working space to the clamped display space:
/// RGB for three-channel images, clamped intensity for Linear.
PlanarImage to_display(const PlanarImage& img);

/// Converts clamped display RGB (or Linear) into `space`.
PlanarImage from_rgb(const PlanarImage& rgb, ColorSpace space);

/// Full-range BT.601 luma, used for grayscale ingestion and SSIM.
PlanarImage luma(const PlanarImage& rgb);

} // namespace eigengs
