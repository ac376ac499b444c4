// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "eigengs/image.hpp"

namespace eigengs {

struct ImageCorpus {
    std::vector<PlanarImage> images;

    std::size_t count() const { return images.size(); }
    const ImageShape& shape() const { return images.front().shape(); }
    ColorSpace space() const { return images.front().space(); }

    /// Throws ShapeError unless every member matches the first.
    void validate() const;
};

/// Brings a decoded RGB image to the working shape and color space. Linear
/// produces a one-channel luma image.
PlanarImage prepare_image(const PlanarImage& rgb, int width, int height, ColorSpace space);

/// Loads every PNG in `dir` (lexicographic order). Undecodable files are
/// skipped with a warning on stderr; fewer than two usable images is an error.
ImageCorpus load_corpus(const std::filesystem::path& dir, int width, int height, ColorSpace space);

} // namespace eigengs
