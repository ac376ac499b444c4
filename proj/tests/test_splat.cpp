// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "eigengs/error.hpp"
#include "eigengs/render.hpp"
#include "oracles.hpp"

using namespace eigengs;

namespace {

EigenGaussianModel random_model(std::size_t n, int w, int h, int c, int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    EigenGaussianModel m;
    m.shape = {w, h, c, k};
    m.geometry = oracle::random_geometry(n, rng);
    m.weights = oracle::random_weights(n * k * c, rng);
    return m;
}

void expect_matches_naive(const EigenGaussianModel& m, double tol) {
    const auto images = render_components(m);
    const std::size_t stride = m.features();
    const auto ref = oracle::naive_render(m.geometry, m.weights, stride, m.shape.width, m.shape.height, 9.0);
    for (int j = 0; j < m.shape.k; ++j) {
        for (int y = 0; y < m.shape.height; ++y) {
            for (int x = 0; x < m.shape.width; ++x) {
                for (int c = 0; c < m.shape.channels; ++c) {
                    const double expect =
                        ref[(static_cast<std::size_t>(y) * m.shape.width + x) * stride + j * m.shape.channels + c];
                    ASSERT_NEAR(images[j].at(x, y, c), expect, tol) << j << " " << x << " " << y << " " << c;
                }
            }
        }
    }
}

} // namespace

TEST(Splat, SingleGaussianPeak) {
    EigenGaussianModel m;
    m.shape = {16, 16, 1, 1};
    m.geometry.resize(1);
    m.geometry.set(0, {{logit(7.5f / 16), logit(7.5f / 16)}, isotropic_factor(2.0)});
    m.weights = {0.7f};
    const auto img = render_components(m)[0];
    EXPECT_NEAR(img.at(7, 7, 0), 0.7, 1e-6);
    // One pixel off along x: exp(-0.5 / 4)
    EXPECT_NEAR(img.at(8, 7, 0), 0.7 * std::exp(-0.125), 1e-6);
}

TEST(Splat, EmptyModelRendersZeros) {
    EigenGaussianModel m;
    m.shape = {8, 5, 3, 2};
    for (const auto& img : render_components(m)) {
        for (float v : img.data()) EXPECT_EQ(v, 0.0f);
    }
}

TEST(Splat, MatchesNaiveOracle) {
    expect_matches_naive(random_model(40, 37, 29, 3, 4, 5), 1e-6);
    expect_matches_naive(random_model(25, 64, 48, 1, 2, 6), 1e-6);
}

TEST(Splat, TiledEqualsNaiveExhaustiveSmall) {
    int cases = 0;
    for (int w = 1; w <= 32; w += 5) {
        for (int h = 1; h <= 32; h += 7) {
            expect_matches_naive(random_model(6, w, h, 1, 1, 1000 + cases), 1e-6);
            ++cases;
        }
    }
    EXPECT_EQ(cases, 35);
}

TEST(Splat, IsotropicDecayIsRadial) {
    EigenGaussianModel m;
    m.shape = {32, 32, 1, 1};
    m.geometry.resize(1);
    m.geometry.set(0, {{0.0f, 0.0f}, isotropic_factor(3.0)});
    m.weights = {1.0f};
    const auto img = render_components(m)[0];
    // Center at (16, 16): pixels at mirrored offsets agree.
    EXPECT_NEAR(img.at(17, 15, 0), img.at(14, 16, 0), 1e-6);
    for (auto [x, y] : {std::pair{19, 16}, {16, 12}, {20, 20}}) {
        const double dx = x + 0.5 - 16, dy = y + 0.5 - 16;
        EXPECT_NEAR(img.at(x, y, 0), std::exp(-(dx * dx + dy * dy) / 18.0), 1e-6);
    }
    double prev = 2.0;
    for (int x = 16; x < 24; ++x) {
        EXPECT_LT(img.at(x, 15, 0), prev);
        prev = img.at(x, 15, 0);
    }
}

TEST(Splat, CutoffIsHard) {
    EigenGaussianModel m;
    m.shape = {64, 1, 1, 1};
    m.geometry.resize(1);
    m.geometry.set(0, {{0.0f, 0.0f}, isotropic_factor(2.0)});
    m.weights = {1.0f};
    const auto img = render_components(m)[0];
    // sigma = dx^2 / 8 with dx = x + 0.5 - 32; gone beyond dx = sqrt(72).
    EXPECT_GT(img.at(32 + 7, 0, 0), 0.0f);
    EXPECT_EQ(img.at(32 + 8, 0, 0), 0.0f);
}

TEST(Splat, IdentityFactorHasUnitRadius) {
    GaussianGeometry g;
    g.resize(1);
    g.set(0, {{0, 0}, {0, 0, 0}});
    EXPECT_NEAR(gaussian_radii(g)[0], 1.0f, 1e-6);
}

TEST(Splat, RadiusMatchesCovarianceEigenvalue) {
    std::mt19937_64 rng(3);
    const auto g = oracle::random_geometry(200, rng, 0.5, 6.0);
    const auto radii = gaussian_radii(g);
    for (std::size_t n = 0; n < g.count(); ++n) {
        Eigen::Matrix2d L;
        L << std::exp(double(g.fac_raw[3 * n])), 0, g.fac_raw[3 * n + 1], std::exp(double(g.fac_raw[3 * n + 2]));
        const Eigen::Matrix2d cov = (L * L.transpose()).inverse();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
        EXPECT_NEAR(radii[n], std::sqrt(es.eigenvalues()(1)), 1e-4 * radii[n]);
    }
}

TEST(Splat, LinearInWeights) {
    auto m = random_model(30, 24, 20, 3, 2, 9);
    auto m2 = m;
    for (float& v : m2.weights) v *= -2.5f;
    const auto a = render_components(m);
    const auto b = render_components(m2);
    for (int j = 0; j < 2; ++j) {
        for (std::size_t p = 0; p < a[j].size(); ++p) EXPECT_NEAR(b[j].data()[p], -2.5 * a[j].data()[p], 1e-5);
    }
}

TEST(Splat, SuperpositionOfDisjointSets) {
    auto m = random_model(30, 24, 20, 1, 1, 10);
    auto first = m, second = m;
    first.geometry.resize(12);
    first.weights.resize(12);
    second.geometry.pos_raw.erase(second.geometry.pos_raw.begin(), second.geometry.pos_raw.begin() + 24);
    second.geometry.fac_raw.erase(second.geometry.fac_raw.begin(), second.geometry.fac_raw.begin() + 36);
    second.weights.erase(second.weights.begin(), second.weights.begin() + 12);
    const auto all = render_components(m)[0];
    const auto a = render_components(first)[0];
    const auto b = render_components(second)[0];
    for (std::size_t p = 0; p < all.size(); ++p) EXPECT_NEAR(all.data()[p], a.data()[p] + b.data()[p], 1e-6);
}

TEST(Splat, SubsetsPartitionTheRender) {
    auto m = random_model(40, 30, 30, 3, 6, 11);
    m.low_count = 10;
    m.k_low = 2;
    for (std::size_t n = 0; n < m.count(); ++n) {
        for (int j = 0; j < 6; ++j) {
            for (int c = 0; c < 3; ++c) {
                if (m.is_cross_pair(n, j)) m.weight(n, j, c) = 0.0f;
            }
        }
    }
    m.validate();
    const auto all = render_components(m, ComponentSubset::All);
    const auto low = render_components(m, ComponentSubset::LowOnly);
    const auto high = render_components(m, ComponentSubset::HighOnly);
    for (int j = 0; j < 6; ++j) {
        for (std::size_t p = 0; p < all[j].size(); ++p) {
            EXPECT_NEAR(all[j].data()[p], low[j].data()[p] + high[j].data()[p], 1e-6);
            if (j < 2) {
                EXPECT_EQ(high[j].data()[p], 0.0f);
            } else {
                EXPECT_EQ(low[j].data()[p], 0.0f);
            }
        }
    }
}

TEST(Splat, RenderImageAddsMean) {
    std::mt19937_64 rng(12);
    ImageGaussianSet set;
    set.mean_ref = oracle::random_image(20, 18, 3, ColorSpace::YCbCr, rng);
    set.geometry = oracle::random_geometry(15, rng);
    set.weights = oracle::random_weights(15 * 3, rng);
    const auto img = render_image(set);
    EXPECT_EQ(img.space(), ColorSpace::YCbCr);
    const auto ref = oracle::naive_render(set.geometry, set.weights, 3, 20, 18, 9.0);
    for (int y = 0; y < 18; ++y) {
        for (int x = 0; x < 20; ++x) {
            for (int c = 0; c < 3; ++c) {
                EXPECT_NEAR(img.at(x, y, c), set.mean_ref.at(x, y, c) + ref[(y * 20 + x) * 3 + c], 1e-5);
            }
        }
    }
}

TEST(Splat, Deterministic) {
    const auto m = random_model(100, 50, 40, 3, 3, 13);
    const auto a = render_components(m);
    const auto b = render_components(m);
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(std::ranges::equal(a[j].data(), b[j].data()));
}
