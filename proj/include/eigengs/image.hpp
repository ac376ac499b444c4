// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace eigengs {

enum class ColorSpace : unsigned char {
    Linear = 0, // single-channel intensity
    RGB = 1,
    YCbCr = 2,
};

std::string_view to_string(ColorSpace space);
ColorSpace parse_color_space(std::string_view name);

struct ImageShape {
    int width = 0;
    int height = 0;
    int channels = 0;

    std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
    std::size_t size() const { return pixels() * channels; }
    bool operator==(const ImageShape&) const = default;
};

/// Row-major, channel-interleaved float image. Samples are nominally in
/// [0,1] but intermediate stages may carry values outside that range.
class PlanarImage {
public:
    PlanarImage() = default;
    PlanarImage(int width, int height, int channels, ColorSpace space, float fill = 0.0f);
    PlanarImage(int width, int height, int channels, ColorSpace space, std::vector<float> data);

    int width() const { return shape_.width; }
    int height() const { return shape_.height; }
    int channels() const { return shape_.channels; }
    ColorSpace space() const { return space_; }
    const ImageShape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    float& at(int x, int y, int c) { return data_[index(x, y, c)]; }
    float at(int x, int y, int c) const { return data_[index(x, y, c)]; }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

    /// True when shape and color space both match.
    bool compatible(const PlanarImage& other) const {
        return shape_ == other.shape_ && space_ == other.space_;
    }

    bool all_finite() const;

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * shape_.width + x) * shape_.channels + c;
    }

    ImageShape shape_;
    ColorSpace space_ = ColorSpace::Linear;
    std::vector<float> data_;
};

} // namespace eigengs
