// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "eigengs/image.hpp"

namespace eigengs {

/// Decodes an 8- or 16-bit PNG into an RGB float image in [0,1]. Gray inputs
/// are expanded to three channels, alpha is dropped. Throws IoError.
PlanarImage read_png(const std::filesystem::path& path);

/// Writes an image as 8-bit PNG. The image is first mapped to display space
/// (clamped RGB or gray), then quantized with round-half-up.
void write_png(const std::filesystem::path& path, const PlanarImage& img);

/// Bilinear resample with pixel-center alignment and edge clamping.
PlanarImage resize_bilinear(const PlanarImage& img, int width, int height);

} // namespace eigengs
