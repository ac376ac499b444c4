// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/eigenbasis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eigengs/error.hpp"
#include "eigengs/parallel.hpp"

namespace eigengs {

namespace {

// Eigenvalues below this fraction of the largest one count as zero when
// determining the numerical rank of the Gram matrix.
constexpr double kRankTolerance = 1e-10;

void tridiagonalize(std::vector<double>& V, std::vector<double>& d, std::vector<double>& e, int n) {
    auto at = [&](int r, int c) -> double& { return V[static_cast<std::size_t>(r) * n + c]; };
    for (int j = 0; j < n; ++j) d[j] = at(n - 1, j);

    for (int i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = at(i - 1, j);
                at(i, j) = 0.0;
                at(j, i) = 0.0;
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) e[j] = 0.0;

            for (int j = 0; j < i; ++j) {
                f = d[j];
                at(j, i) = f;
                g = e[j] + at(j, j) * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += at(k, j) * d[k];
                    e[k] += at(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) at(k, j) -= (f * e[k] + g * d[k]);
                d[j] = at(i - 1, j);
                at(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for (int i = 0; i < n - 1; ++i) {
        at(n - 1, i) = at(i, i);
        at(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; ++k) d[k] = at(k, i + 1) / h;
            for (int j = 0; j <= i; ++j) {
                double g = 0.0;
                for (int k = 0; k <= i; ++k) g += at(k, i + 1) * at(k, j);
                for (int k = 0; k <= i; ++k) at(k, j) -= g * d[k];
            }
        }
        for (int k = 0; k <= i; ++k) at(k, i + 1) = 0.0;
    }
    for (int j = 0; j < n; ++j) {
        d[j] = at(n - 1, j);
        at(n - 1, j) = 0.0;
    }
    at(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

void implicit_ql(std::vector<double>& V, std::vector<double>& d, std::vector<double>& e, int n) {
    auto at = [&](int r, int c) -> double& { return V[static_cast<std::size_t>(r) * n + c]; };
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::ldexp(1.0, -52);
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            do {
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (int k = 0; k < n; ++k) {
                        h = at(k, i + 1);
                        at(k, i + 1) = s * at(k, i) + c * h;
                        at(k, i) = c * at(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

void require_compatible(const Eigenbasis& basis, const PlanarImage& img) {
    if (!img.compatible(basis.mean)) {
        throw Error(ErrorKind::ShapeError, "image shape or color space does not match the basis");
    }
}

} // namespace

SymmetricEigen symmetric_eigen(std::span<const double> matrix, int n) {
    if (n < 1 || matrix.size() != static_cast<std::size_t>(n) * n) {
        throw Error(ErrorKind::ShapeError, "symmetric_eigen expects an n x n matrix");
    }
    std::vector<double> V(matrix.begin(), matrix.end());
    std::vector<double> d(n), e(n);
    tridiagonalize(V, d, e, n);
    implicit_ql(V, d, e, n);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (int r = 0; r < n; ++r) {
            out.vectors[static_cast<std::size_t>(j) * n + r] = V[static_cast<std::size_t>(r) * n + order[j]];
        }
    }
    return out;
}

PlanarImage Eigenbasis::component_image(int j) const {
    const auto c = component(j);
    return PlanarImage(shape().width, shape().height, shape().channels, space(), std::vector<float>(c.begin(), c.end()));
}

Eigenbasis fit_basis(const ImageCorpus& corpus, int k) {
    corpus.validate();
    const std::size_t m = corpus.count();
    if (m < 2) {
        throw Error(ErrorKind::RankError, "need at least 2 images, got " + std::to_string(m));
    }
    const std::size_t d = corpus.images.front().size();
    if (k < 1 || static_cast<std::size_t>(k) > std::min(m - 1, d)) {
        throw Error(ErrorKind::RankError,
                    "k=" + std::to_string(k) + " outside [1, " + std::to_string(std::min(m - 1, d)) + "]");
    }

    std::vector<double> mean(d, 0.0);
    for (const auto& img : corpus.images) {
        auto px = img.data();
        for (std::size_t p = 0; p < d; ++p) mean[p] += px[p];
    }
    for (double& v : mean) v /= static_cast<double>(m);

    Eigenbasis basis;
    const ImageShape& shape = corpus.shape();
    basis.mean = PlanarImage(shape.width, shape.height, shape.channels, corpus.space());
    std::transform(mean.begin(), mean.end(), basis.mean.data().begin(), [](double v) { return static_cast<float>(v); });

    // Centered samples against the stored (float) mean, so that project()
    // of a training image sees exactly the vector the basis was built from.
    std::vector<double> centered(m * d);
    auto mean_f = basis.mean.data();
    parallel_for(m, [&](std::size_t i) {
        auto px = corpus.images[i].data();
        double* row = centered.data() + i * d;
        for (std::size_t p = 0; p < d; ++p) row[p] = static_cast<double>(px[p]) - mean_f[p];
    });

    std::vector<double> gram(m * m, 0.0);
    parallel_for(m, [&](std::size_t a) {
        const double* va = centered.data() + a * d;
        for (std::size_t b = a; b < m; ++b) {
            const double* vb = centered.data() + b * d;
            double s = 0.0;
            for (std::size_t p = 0; p < d; ++p) s += va[p] * vb[p];
            gram[a * m + b] = s / static_cast<double>(m);
        }
    });
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < a; ++b) gram[a * m + b] = gram[b * m + a];
    }

    const SymmetricEigen eig = symmetric_eigen(gram, static_cast<int>(m));
    const double top = std::max(eig.values.front(), 0.0);
    int rank = 0;
    for (double v : eig.values) {
        if (top > 0.0 && v > kRankTolerance * top) ++rank;
    }
    if (k > rank) {
        throw Error(ErrorKind::RankError,
                    "k=" + std::to_string(k) + " exceeds numerical rank " + std::to_string(rank) + " of the corpus");
    }

    // Map Gram eigenvectors back to image space: phi_j = V^T u_j / ||V^T u_j||.
    std::vector<double> comps(static_cast<std::size_t>(k) * d, 0.0);
    parallel_for(static_cast<std::size_t>(k), [&](std::size_t j) {
        double* phi = comps.data() + j * d;
        const double* u = eig.vectors.data() + j * m;
        for (std::size_t i = 0; i < m; ++i) {
            const double* v = centered.data() + i * d;
            for (std::size_t p = 0; p < d; ++p) phi[p] += u[i] * v[p];
        }
    });

    // Two passes of modified Gram-Schmidt restore orthonormality lost to
    // round-off in the trailing components.
    for (int j = 0; j < k; ++j) {
        double* phi = comps.data() + static_cast<std::size_t>(j) * d;
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                const double* prev = comps.data() + static_cast<std::size_t>(i) * d;
                double dot = 0.0;
                for (std::size_t p = 0; p < d; ++p) dot += phi[p] * prev[p];
                for (std::size_t p = 0; p < d; ++p) phi[p] -= dot * prev[p];
            }
            double norm = 0.0;
            for (std::size_t p = 0; p < d; ++p) norm += phi[p] * phi[p];
            norm = std::sqrt(norm);
            for (std::size_t p = 0; p < d; ++p) phi[p] /= norm;
        }
        std::size_t arg = 0;
        for (std::size_t p = 1; p < d; ++p) {
            if (std::abs(phi[p]) > std::abs(phi[arg])) arg = p;
        }
        if (phi[arg] < 0) {
            for (std::size_t p = 0; p < d; ++p) phi[p] = -phi[p];
        }
    }

    basis.components.resize(comps.size());
    std::transform(comps.begin(), comps.end(), basis.components.begin(), [](double v) { return static_cast<float>(v); });
    basis.eigenvalues.assign(eig.values.begin(), eig.values.begin() + k);
    for (double& v : basis.eigenvalues) v = std::max(v, 0.0);
    return basis;
}

ProjectionCoeffs project(const Eigenbasis& basis, const PlanarImage& img) {
    require_compatible(basis, img);
    const std::size_t d = basis.dim();
    auto px = img.data();
    auto mean = basis.mean.data();
    std::vector<double> residual(d);
    for (std::size_t p = 0; p < d; ++p) residual[p] = static_cast<double>(px[p]) - mean[p];

    ProjectionCoeffs out;
    out.coeffs.resize(basis.k());
    for (int j = 0; j < basis.k(); ++j) {
        auto phi = basis.component(j);
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p) s += residual[p] * phi[p];
        out.coeffs[j] = s;
    }
    return out;
}

PlanarImage reconstruct(const Eigenbasis& basis, const ProjectionCoeffs& coeffs) {
    if (coeffs.k() != basis.k()) {
        throw Error(ErrorKind::ShapeError, "expected " + std::to_string(basis.k()) + " coefficients, got " +
                                               std::to_string(coeffs.k()));
    }
    const std::size_t d = basis.dim();
    auto mean = basis.mean.data();
    std::vector<double> acc(mean.begin(), mean.end());
    for (int j = 0; j < basis.k(); ++j) {
        const double w = coeffs.coeffs[j];
        if (w == 0.0) continue;
        auto phi = basis.component(j);
        for (std::size_t p = 0; p < d; ++p) acc[p] += w * phi[p];
    }
    PlanarImage out = basis.mean;
    std::transform(acc.begin(), acc.end(), out.data().begin(), [](double v) { return static_cast<float>(v); });
    return out;
}

} // namespace eigengs
