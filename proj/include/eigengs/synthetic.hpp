// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "eigengs/image.hpp"

namespace eigengs {

/// Smooth RGB test images: a random linear color gradient with a few soft
/// colored blobs on top, clamped to [0,1]. Deterministic for a given seed.
struct SyntheticSpec {
    int width = 64;
    int height = 64;
    int min_blobs = 2;
    int max_blobs = 5;
    double min_sigma = 0.06; // blob sigma as a fraction of min(width, height)
    double max_sigma = 0.22;
};

PlanarImage synthetic_image(const SyntheticSpec& spec, std::uint64_t seed);
std::vector<PlanarImage> synthetic_images(const SyntheticSpec& spec, std::size_t count, std::uint64_t seed);

} // namespace eigengs
