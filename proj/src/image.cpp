// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eigengs/error.hpp"

namespace eigengs {

std::string_view to_string(ColorSpace space) {
    switch (space) {
    case ColorSpace::Linear: return "linear";
    case ColorSpace::RGB: return "rgb";
    case ColorSpace::YCbCr: return "ycbcr";
    }
    return "unknown";
}

ColorSpace parse_color_space(std::string_view name) {
    if (name == "linear" || name == "gray") return ColorSpace::Linear;
    if (name == "rgb") return ColorSpace::RGB;
    if (name == "ycbcr") return ColorSpace::YCbCr;
    throw Error(ErrorKind::ConfigError, "unknown color space '" + std::string(name) + "'");
}

namespace {

ImageShape checked_shape(int width, int height, int channels, ColorSpace space) {
    if (width < 1 || height < 1) {
        throw Error(ErrorKind::ShapeError, "image dimensions must be positive");
    }
    if (channels != 1 && channels != 3) {
        throw Error(ErrorKind::ChannelMismatch, "channels must be 1 or 3, got " + std::to_string(channels));
    }
    if (space != ColorSpace::Linear && channels != 3) {
        throw Error(ErrorKind::ChannelMismatch, std::string(to_string(space)) + " images need 3 channels");
    }
    return {width, height, channels};
}

} // namespace

PlanarImage::PlanarImage(int width, int height, int channels, ColorSpace space, float fill)
    : shape_(checked_shape(width, height, channels, space)),
      space_(space),
      data_(shape_.size(), fill) {}

PlanarImage::PlanarImage(int width, int height, int channels, ColorSpace space, std::vector<float> data)
    : shape_(checked_shape(width, height, channels, space)),
      space_(space),
      data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
        throw Error(ErrorKind::ShapeError, "data length " + std::to_string(data_.size()) + " does not match " +
                                               std::to_string(shape_.size()));
    }
}

bool PlanarImage::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

} // namespace eigengs
