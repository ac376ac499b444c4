// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/gaussian.hpp"

#include <cmath>
#include <string>

#include "eigengs/error.hpp"

namespace eigengs {

Gaussian2D GaussianGeometry::get(std::size_t n) const {
    Gaussian2D g;
    g.pos_raw = {pos_raw[2 * n], pos_raw[2 * n + 1]};
    g.fac_raw = {fac_raw[3 * n], fac_raw[3 * n + 1], fac_raw[3 * n + 2]};
    return g;
}

void GaussianGeometry::set(std::size_t n, const Gaussian2D& g) {
    pos_raw[2 * n] = g.pos_raw[0];
    pos_raw[2 * n + 1] = g.pos_raw[1];
    for (int i = 0; i < 3; ++i) fac_raw[3 * n + i] = g.fac_raw[i];
}

std::array<std::size_t, 2> EigenGaussianModel::gaussian_range(ComponentSubset subset) const {
    const std::size_t low = static_cast<std::size_t>(low_count);
    switch (subset) {
    case ComponentSubset::All: return {0, count()};
    case ComponentSubset::LowOnly: return {0, low};
    case ComponentSubset::HighOnly: return {low, count()};
    }
    return {0, count()};
}

std::array<int, 2> EigenGaussianModel::component_range(ComponentSubset subset) const {
    switch (subset) {
    case ComponentSubset::All: return {0, shape.k};
    case ComponentSubset::LowOnly: return {0, k_low};
    case ComponentSubset::HighOnly: return {k_low, shape.k};
    }
    return {0, shape.k};
}

void EigenGaussianModel::validate() const {
    if (shape.width < 1 || shape.height < 1 || (shape.channels != 1 && shape.channels != 3) || shape.k < 1) {
        throw Error(ErrorKind::ShapeError, "invalid basis shape");
    }
    if (count() == 0 || geometry.fac_raw.size() != count() * 3) {
        throw Error(ErrorKind::ShapeError, "geometry arrays are inconsistent");
    }
    if (weights.size() != count() * features()) {
        throw Error(ErrorKind::ShapeError, "weight tensor has " + std::to_string(weights.size()) + " entries, expected " +
                                               std::to_string(count() * features()));
    }
    if (low_count < 0 || static_cast<std::size_t>(low_count) >= count()) {
        throw Error(ErrorKind::ConfigError, "low partition size out of range");
    }
    if (low_count == 0 ? k_low != 0 : (k_low <= 0 || k_low >= shape.k)) {
        throw Error(ErrorKind::ConfigError, "low component split out of range");
    }
    for (std::size_t n = 0; n < count(); ++n) {
        for (int j = 0; j < shape.k; ++j) {
            if (!is_cross_pair(n, j)) continue;
            for (int c = 0; c < shape.channels; ++c) {
                if (weight(n, j, c) != 0.0f) {
                    throw Error(ErrorKind::ConfigError, "cross-partition weight is nonzero");
                }
            }
        }
    }
}

void ImageGaussianSet::validate() const {
    if (mean_ref.empty()) {
        throw Error(ErrorKind::ShapeError, "image set has no mean image");
    }
    if (count() == 0 || geometry.fac_raw.size() != count() * 3 ||
        weights.size() != count() * static_cast<std::size_t>(channels())) {
        throw Error(ErrorKind::ShapeError, "image set arrays are inconsistent");
    }
}

float logistic(float x) { return static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(x)))); }

float logit(float p) { return static_cast<float>(std::log(p / (1.0 - p))); }

std::array<double, 3> covariance_from_factor(std::span<const float, 3> fac) {
    // Sigma^-1 = L L^T, L = [[ea, 0], [b, ec]]; det(Sigma^-1) = (ea * ec)^2.
    const double ea = std::exp(static_cast<double>(fac[0]));
    const double b = fac[1];
    const double ec = std::exp(static_cast<double>(fac[2]));
    const double inv_xx = ea * ea;
    const double inv_xy = b * ea;
    const double inv_yy = b * b + ec * ec;
    const double det = (ea * ec) * (ea * ec);
    return {inv_yy / det, -inv_xy / det, inv_xx / det};
}

std::array<float, 3> isotropic_factor(double scale) {
    const float a = static_cast<float>(std::log(1.0 / scale));
    return {a, 0.0f, a};
}

} // namespace eigengs
