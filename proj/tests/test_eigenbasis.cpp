// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "eigengs/eigenbasis.hpp"
#include "eigengs/error.hpp"
#include "oracles.hpp"

using namespace eigengs;

namespace {

ImageCorpus random_corpus(int m, int w, int h, int c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ImageCorpus corpus;
    for (int i = 0; i < m; ++i) {
        corpus.images.push_back(
            oracle::random_image(w, h, c, c == 1 ? ColorSpace::Linear : ColorSpace::RGB, rng));
    }
    return corpus;
}

double residual_mse(const Eigenbasis& basis, const PlanarImage& img) {
    const auto rec = reconstruct(basis, project(basis, img));
    double s = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double d = rec.data()[i] - img.data()[i];
        s += d * d;
    }
    return s / img.size();
}

} // namespace

TEST(SymmetricEigen, MatchesKnownSpectrum) {
    const std::vector<double> m = {2, 1, 0, 1, 2, 0, 0, 0, 5};
    const auto e = symmetric_eigen(m, 3);
    EXPECT_NEAR(e.values[0], 5, 1e-12);
    EXPECT_NEAR(e.values[1], 3, 1e-12);
    EXPECT_NEAR(e.values[2], 1, 1e-12);
}

TEST(Eigenbasis, TwoImagesRankOne) {
    auto corpus = random_corpus(2, 3, 3, 3, 1);
    const auto basis = fit_basis(corpus, 1);
    for (std::size_t p = 0; p < basis.dim(); ++p) {
        EXPECT_NEAR(basis.mean.data()[p], 0.5 * (corpus.images[0].data()[p] + corpus.images[1].data()[p]), 1e-6);
    }
    for (const auto& img : corpus.images) {
        const auto rec = reconstruct(basis, project(basis, img));
        for (std::size_t p = 0; p < img.size(); ++p) EXPECT_NEAR(rec.data()[p], img.data()[p], 1e-5);
    }
}

TEST(Eigenbasis, IdenticalImagesHaveNoRank) {
    ImageCorpus corpus;
    std::mt19937_64 rng(4);
    const auto img = oracle::random_image(4, 4, 1, ColorSpace::Linear, rng);
    for (int i = 0; i < 4; ++i) corpus.images.push_back(img);
    try {
        fit_basis(corpus, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RankError);
    }
}

TEST(Eigenbasis, RejectsOutOfRangeK) {
    auto corpus = random_corpus(4, 2, 2, 1, 2);
    EXPECT_THROW(fit_basis(corpus, 0), Error);
    EXPECT_THROW(fit_basis(corpus, 4), Error); // > m - 1
    EXPECT_NO_THROW(fit_basis(corpus, 3));
}

TEST(Eigenbasis, EigenvaluesMatchDenseCovariance) {
    auto corpus = random_corpus(5, 4, 4, 1, 17);
    const auto basis = fit_basis(corpus, 4);
    const auto dense = oracle::dense_pca(corpus.images);
    for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(basis.eigenvalues[j], dense.values(j), 1e-8 * dense.values(j)) << j;
    }
}

TEST(Eigenbasis, ComponentsOrthonormalAndSorted) {
    auto corpus = random_corpus(9, 5, 4, 3, 8);
    const auto basis = fit_basis(corpus, 8);
    for (int i = 0; i < basis.k(); ++i) {
        if (i > 0) {
            EXPECT_LE(basis.eigenvalues[i], basis.eigenvalues[i - 1]);
        }
        for (int j = 0; j < basis.k(); ++j) {
            double dot = 0;
            for (std::size_t p = 0; p < basis.dim(); ++p) dot += double(basis.component(i)[p]) * basis.component(j)[p];
            EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-6);
        }
    }
}

TEST(Eigenbasis, SignConventionAndDeterminism) {
    auto corpus = random_corpus(6, 4, 4, 3, 23);
    const auto a = fit_basis(corpus, 5);
    const auto b = fit_basis(corpus, 5);
    EXPECT_EQ(a.components, b.components);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    for (int j = 0; j < a.k(); ++j) {
        auto c = a.component(j);
        const auto it = std::max_element(c.begin(), c.end(), [](float x, float y) { return std::abs(x) < std::abs(y); });
        EXPECT_GT(*it, 0.0f);
    }
}

TEST(Projection, MeanProjectsToZero) {
    auto corpus = random_corpus(6, 4, 3, 3, 31);
    const auto basis = fit_basis(corpus, 4);
    const auto w = project(basis, basis.mean);
    for (double v : w.coeffs) EXPECT_EQ(v, 0.0);
}

TEST(Projection, MeanPlusComponentIsUnitVector) {
    auto corpus = random_corpus(6, 4, 3, 3, 32);
    const auto basis = fit_basis(corpus, 4);
    PlanarImage img = basis.mean;
    for (std::size_t p = 0; p < basis.dim(); ++p) img.data()[p] += basis.component(0)[p];
    const auto w = project(basis, img);
    EXPECT_NEAR(w.coeffs[0], 1.0, 1e-6);
    for (int j = 1; j < 4; ++j) EXPECT_NEAR(w.coeffs[j], 0.0, 1e-6);
}

TEST(Projection, InSpanMatchesLeastSquares) {
    auto corpus = random_corpus(7, 4, 4, 1, 44);
    const auto basis = fit_basis(corpus, 5);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd(0, 0.3);
    std::vector<double> truth(5);
    PlanarImage img = basis.mean;
    for (int j = 0; j < 5; ++j) {
        truth[j] = nd(rng);
        for (std::size_t p = 0; p < basis.dim(); ++p) img.data()[p] += static_cast<float>(truth[j] * basis.component(j)[p]);
    }
    // Normal equations on the stored (f32) component matrix.
    Eigen::MatrixXd A(basis.dim(), 5);
    Eigen::VectorXd r(basis.dim());
    for (std::size_t p = 0; p < basis.dim(); ++p) {
        for (int j = 0; j < 5; ++j) A(p, j) = basis.component(j)[p];
        r(p) = double(img.data()[p]) - basis.mean.data()[p];
    }
    const Eigen::VectorXd ls = (A.transpose() * A).ldlt().solve(A.transpose() * r);
    const auto w = project(basis, img);
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(w.coeffs[j], ls(j), 1e-6);
}

TEST(Projection, ShapeMismatch) {
    auto corpus = random_corpus(4, 4, 4, 1, 3);
    const auto basis = fit_basis(corpus, 2);
    EXPECT_THROW(project(basis, PlanarImage(5, 4, 1, ColorSpace::Linear)), Error);
    EXPECT_THROW(reconstruct(basis, ProjectionCoeffs{{1.0}}), Error);
}

TEST(Reconstruct, ZeroCoefficientsGiveMean) {
    auto corpus = random_corpus(4, 3, 3, 3, 12);
    const auto basis = fit_basis(corpus, 3);
    const auto rec = reconstruct(basis, ProjectionCoeffs{std::vector<double>(3, 0.0)});
    for (std::size_t p = 0; p < rec.size(); ++p) EXPECT_EQ(rec.data()[p], basis.mean.data()[p]);
}

TEST(Reconstruct, FullRankReproducesTrainingImages) {
    auto corpus = random_corpus(6, 4, 4, 3, 13);
    const auto basis = fit_basis(corpus, 5);
    for (const auto& img : corpus.images) {
        const auto rec = reconstruct(basis, project(basis, img));
        for (std::size_t p = 0; p < img.size(); ++p) EXPECT_NEAR(rec.data()[p], img.data()[p], 1e-5);
    }
}

TEST(Reconstruct, HeldOutResidualNeverGrows) {
    auto corpus = random_corpus(8, 4, 4, 3, 14);
    const auto basis = fit_basis(corpus, 5);
    std::mt19937_64 rng(99);
    for (int t = 0; t < 10; ++t) {
        const auto x = oracle::random_image(4, 4, 3, ColorSpace::RGB, rng);
        const auto rec = reconstruct(basis, project(basis, x));
        double err = 0, base = 0;
        for (std::size_t p = 0; p < x.size(); ++p) {
            err += std::pow(double(rec.data()[p]) - x.data()[p], 2);
            base += std::pow(double(x.data()[p]) - basis.mean.data()[p], 2);
        }
        EXPECT_LE(err, base + 1e-9);
    }
}

TEST(Reconstruct, MseMonotoneInK) {
    auto corpus = random_corpus(10, 4, 4, 1, 15);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 9; ++k) {
        const auto basis = fit_basis(corpus, k);
        double total = 0;
        for (const auto& img : corpus.images) total += residual_mse(basis, img);
        EXPECT_LE(total, prev + 1e-9) << k;
        prev = total;
    }
}

// Exhaustive small-instance agreement of the Gram route with the dense route.
TEST(Eigenbasis, GramRouteEqualsDenseRoute) {
    int cases = 0;
    for (int d_side : {2, 3, 4}) {
        for (int c : {1, 3}) {
            for (int m : {3, 6, 10}) {
                const int d = d_side * d_side * c;
                if (d > 64) continue;
                auto corpus = random_corpus(m, d_side, d_side, c, 100 + cases);
                const int k = std::min(m - 1, d);
                const auto basis = fit_basis(corpus, k);
                const auto dense = oracle::dense_pca(corpus.images);
                for (int j = 0; j < k; ++j) {
                    ASSERT_NEAR(basis.eigenvalues[j], dense.values(j), 1e-8 * dense.values(j));
                    double dot = 0;
                    for (int p = 0; p < d; ++p) dot += basis.component(j)[p] * dense.vectors(p, j);
                    const double sign = dot < 0 ? -1.0 : 1.0;
                    for (int p = 0; p < d; ++p) {
                        ASSERT_NEAR(basis.component(j)[p], sign * dense.vectors(p, j), 1e-6);
                    }
                }
                ++cases;
            }
        }
    }
    EXPECT_GT(cases, 10);
}
