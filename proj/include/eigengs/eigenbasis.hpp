// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "eigengs/corpus.hpp"
#include "eigengs/image.hpp"

namespace eigengs {

/// Mean image plus k orthonormal eigenimages of the corpus covariance.
/// Each component is a length-d vector laid out exactly like the image data
/// (d = width * height * channels), stored row-wise in `components`.
struct Eigenbasis {
    PlanarImage mean;
    std::vector<float> components; // k x d
    std::vector<double> eigenvalues; // non-increasing, >= 0

    int k() const { return static_cast<int>(eigenvalues.size()); }
    std::size_t dim() const { return mean.size(); }
    const ImageShape& shape() const { return mean.shape(); }
    ColorSpace space() const { return mean.space(); }

    std::span<const float> component(int j) const {
        return std::span<const float>(components).subspan(static_cast<std::size_t>(j) * dim(), dim());
    }

    /// Component j reshaped to an image in the basis color space.
    PlanarImage component_image(int j) const;
};

struct ProjectionCoeffs {
    std::vector<double> coeffs;

    int k() const { return static_cast<int>(coeffs.size()); }
};

/// Snapshot-method PCA: diagonalizes the m x m Gram matrix of centered
/// images and maps its eigenvectors back to image space, so the d x d
/// covariance is never formed. Each component's largest-magnitude entry is
/// positive. Throws RankError unless 1 <= k <= min(m-1, d, numerical rank).
Eigenbasis fit_basis(const ImageCorpus& corpus, int k);

/// w_j = <img - mean, component_j>, accumulated in double.
ProjectionCoeffs project(const Eigenbasis& basis, const PlanarImage& img);

/// mean + sum_j w_j component_j, unclamped.
PlanarImage reconstruct(const Eigenbasis& basis, const ProjectionCoeffs& coeffs);

struct SymmetricEigen {
    std::vector<double> values;  // descending
    std::vector<double> vectors; // column j (stored as row j, length n) pairs with values[j]
};

/// Eigendecomposition of a dense symmetric n x n row-major matrix via
/// Householder tridiagonalization and implicit QL. Deterministic.
SymmetricEigen symmetric_eigen(std::span<const double> matrix, int n);

} // namespace eigengs
