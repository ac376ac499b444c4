// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/transform.hpp"

#include <string>

#include "eigengs/error.hpp"

namespace eigengs {

ImageGaussianSet collapse(const EigenGaussianModel& model, const ProjectionCoeffs& coeffs, const Eigenbasis& basis) {
    const BasisShape& shape = model.shape;
    if (coeffs.k() != shape.k) {
        throw Error(ErrorKind::ShapeError, "model has " + std::to_string(shape.k) + " components, coefficients have " +
                                               std::to_string(coeffs.k()));
    }
    const BasisShape basis_shape{basis.shape().width, basis.shape().height, basis.shape().channels, basis.k()};
    if (!(basis_shape == shape)) {
        throw Error(ErrorKind::ShapeError, "basis does not match the model shape");
    }

    const int C = shape.channels;
    ImageGaussianSet set;
    set.geometry = model.geometry;
    set.mean_ref = basis.mean;
    set.weights.resize(model.count() * C);
    for (std::size_t n = 0; n < model.count(); ++n) {
        for (int c = 0; c < C; ++c) {
            double acc = 0.0;
            for (int j = 0; j < shape.k; ++j) acc += coeffs.coeffs[j] * static_cast<double>(model.weight(n, j, c));
            set.weights[n * C + c] = static_cast<float>(acc);
        }
    }
    return set;
}

ImageGaussianSet init_for_image(const EigenGaussianModel& model, const Eigenbasis& basis, const PlanarImage& img) {
    return collapse(model, project(basis, img), basis);
}

} // namespace eigengs
