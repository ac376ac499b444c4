// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "eigengs/eigenbasis.hpp"
#include "eigengs/gaussian.hpp"

namespace eigengs {

/// c'_n = sum_j w_j psi'_{n,j} per channel, accumulated in double. Geometry
/// is copied and the basis mean becomes the render offset.
ImageGaussianSet collapse(const EigenGaussianModel& model, const ProjectionCoeffs& coeffs, const Eigenbasis& basis);

/// collapse(model, project(basis, img), basis).
ImageGaussianSet init_for_image(const EigenGaussianModel& model, const Eigenbasis& basis, const PlanarImage& img);

} // namespace eigengs
