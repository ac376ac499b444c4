// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "eigengs/image.hpp"

namespace eigengs {

/// Raw, unconstrained parameters of one 2D Gaussian.
///
/// The center is logistic(pos_raw) in [0,1]^2, scaled by the canvas size at
/// render time. The inverse covariance, in pixel units, is L * L^T with
/// L = [[exp(a), 0], [b, exp(c)]] and fac_raw = (a, b, c).
struct Gaussian2D {
    std::array<float, 2> pos_raw{};
    std::array<float, 3> fac_raw{};
};

/// Structure-of-arrays view of N Gaussians, as optimized by Adam.
struct GaussianGeometry {
    std::vector<float> pos_raw; // N x 2
    std::vector<float> fac_raw; // N x 3

    std::size_t count() const { return pos_raw.size() / 2; }
    void resize(std::size_t n) {
        pos_raw.resize(n * 2);
        fac_raw.resize(n * 3);
    }
    Gaussian2D get(std::size_t n) const;
    void set(std::size_t n, const Gaussian2D& g);
    bool operator==(const GaussianGeometry&) const = default;
};

struct BasisShape {
    int width = 0;
    int height = 0;
    int channels = 0;
    int k = 0;
    bool operator==(const BasisShape&) const = default;
};

enum class ComponentSubset { All, LowOnly, HighOnly };

/// One shared set of Gaussians approximating all k eigenimages. Weights are
/// laid out N x k x C. When frequency learning is on (low_count > 0),
/// Gaussians [0, low_count) model components [0, k_low) and the rest model
/// [k_low, k); every cross-pair weight is exactly zero.
struct EigenGaussianModel {
    GaussianGeometry geometry;
    std::vector<float> weights;
    int low_count = 0;
    int k_low = 0;
    BasisShape shape;

    std::size_t count() const { return geometry.count(); }
    bool frequency_split() const { return low_count > 0; }
    std::size_t features() const { return static_cast<std::size_t>(shape.k) * shape.channels; }

    float& weight(std::size_t n, int j, int c) {
        return weights[(n * shape.k + j) * shape.channels + c];
    }
    float weight(std::size_t n, int j, int c) const {
        return weights[(n * shape.k + j) * shape.channels + c];
    }

    /// True when (n, j) belongs to a partition pair that must stay zero.
    bool is_cross_pair(std::size_t n, int j) const {
        return frequency_split() && ((static_cast<int>(n) < low_count) != (j < k_low));
    }

    /// Gaussian index and component index ranges covered by a subset.
    std::array<std::size_t, 2> gaussian_range(ComponentSubset subset) const;
    std::array<int, 2> component_range(ComponentSubset subset) const;

    /// Throws ShapeError/ConfigError when sizes or partition bounds are off,
    /// or when a cross-pair weight is nonzero.
    void validate() const;
};

/// Per-image Gaussians with collapsed per-channel weights (N x C) rendered
/// on top of the basis mean.
struct ImageGaussianSet {
    GaussianGeometry geometry;
    std::vector<float> weights;
    PlanarImage mean_ref;

    std::size_t count() const { return geometry.count(); }
    int channels() const { return mean_ref.channels(); }
    void validate() const;
};

/// Logistic map with its inverse; used for the center parameterization.
float logistic(float x);
float logit(float p);

/// Covariance (pixel units) implied by fac_raw, as {xx, xy, yy}.
std::array<double, 3> covariance_from_factor(std::span<const float, 3> fac);

/// Raw factor that produces an isotropic covariance scale^2 * I.
std::array<float, 3> isotropic_factor(double scale);

} // namespace eigengs
