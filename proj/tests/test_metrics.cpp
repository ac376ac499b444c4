// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "eigengs/color.hpp"
#include "eigengs/error.hpp"
#include "eigengs/metrics.hpp"
#include "oracles.hpp"

using namespace eigengs;

namespace {

std::vector<double> as_double(const PlanarImage& img) { return {img.data().begin(), img.data().end()}; }

} // namespace

TEST(Psnr, IdenticalImagesAreInfinite) {
    std::mt19937_64 rng(1);
    const auto a = oracle::random_image(9, 7, 3, ColorSpace::RGB, rng);
    EXPECT_TRUE(std::isinf(psnr(a, a)));
    EXPECT_GT(psnr(a, a), 0);
    EXPECT_EQ(ssim(a, a), 1.0);
}

TEST(Psnr, KnownMse) {
    PlanarImage a(8, 8, 1, ColorSpace::Linear, 0.5f);
    PlanarImage b(8, 8, 1, ColorSpace::Linear, 0.6f);
    EXPECT_NEAR(psnr(a, b), 20.0, 1e-5);
    EXPECT_NEAR(mse(a, b), 0.01, 1e-8);
}

TEST(Psnr, ScalarOracle) {
    std::mt19937_64 rng(2);
    const auto a = oracle::random_image(13, 11, 3, ColorSpace::RGB, rng);
    const auto b = oracle::random_image(13, 11, 3, ColorSpace::RGB, rng);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(double(a.data()[i]) - b.data()[i], 2);
    EXPECT_NEAR(psnr(a, b), 10 * std::log10(a.size() / s), 1e-9);
    EXPECT_NEAR(psnr_raw(a, b), psnr(a, b), 1e-9);
}

TEST(Psnr, DisplaySpaceConversion) {
    std::mt19937_64 rng(3);
    const auto rgb_a = oracle::random_image(10, 10, 3, ColorSpace::RGB, rng, 0.1f, 0.9f);
    const auto rgb_b = oracle::random_image(10, 10, 3, ColorSpace::RGB, rng, 0.1f, 0.9f);
    const auto ya = rgb_to_ycbcr(rgb_a), yb = rgb_to_ycbcr(rgb_b);
    EXPECT_NEAR(psnr(ya, yb), psnr(rgb_a, rgb_b), 1e-3);
    EXPECT_NEAR(ssim(ya, yb), ssim(rgb_a, rgb_b), 1e-4);
}

TEST(Psnr, ClampsOutOfRange) {
    PlanarImage a(4, 4, 1, ColorSpace::Linear, 1.5f);
    PlanarImage b(4, 4, 1, ColorSpace::Linear, 1.0f);
    EXPECT_TRUE(std::isinf(psnr(a, b)));
    EXPECT_NEAR(psnr_raw(a, b), 10 * std::log10(1 / 0.25), 1e-9);
}

TEST(Ssim, MatchesDirectWindowOracle) {
    std::mt19937_64 rng(4);
    for (auto [w, h] : {std::pair{23, 17}, {11, 11}, {5, 30}}) {
        const auto a = oracle::random_image(w, h, 1, ColorSpace::Linear, rng);
        auto b = a;
        std::normal_distribution<float> nd(0, 0.1f);
        for (float& v : b.data()) v = std::clamp(v + nd(rng), 0.0f, 1.0f);
        EXPECT_NEAR(ssim(a, b), oracle::direct_ssim(as_double(a), as_double(b), w, h), 1e-6);
    }
}

TEST(Ssim, ColorUsesLuma) {
    std::mt19937_64 rng(5);
    const auto a = oracle::random_image(16, 12, 3, ColorSpace::RGB, rng);
    const auto b = oracle::random_image(16, 12, 3, ColorSpace::RGB, rng);
    auto la = luma(a), lb = luma(b);
    EXPECT_NEAR(ssim(a, b), oracle::direct_ssim(as_double(la), as_double(lb), 16, 12), 1e-6);
}

TEST(Ssim, ConstantImagesClosedForm) {
    PlanarImage a(12, 12, 1, ColorSpace::Linear, 0.4f);
    PlanarImage b(12, 12, 1, ColorSpace::Linear, 0.7f);
    const double x = 0.4f, y = 0.7f, c1 = 1e-4;
    EXPECT_NEAR(ssim(a, b), (2 * x * y + c1) / (x * x + y * y + c1), 1e-9);
    EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
}

TEST(Ssim, Symmetric) {
    std::mt19937_64 rng(6);
    const auto a = oracle::random_image(20, 20, 3, ColorSpace::RGB, rng);
    const auto b = oracle::random_image(20, 20, 3, ColorSpace::RGB, rng);
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
}

TEST(Metrics, MonotoneInNoise) {
    std::mt19937_64 rng(7);
    const auto a = oracle::random_image(24, 24, 1, ColorSpace::Linear, rng, 0.3f, 0.7f);
    const auto noise = oracle::random_image(24, 24, 1, ColorSpace::Linear, rng, -0.25f, 0.25f);
    double prev_psnr = std::numeric_limits<double>::infinity(), prev_ssim = 1.0 + 1e-12;
    for (float s : {0.05f, 0.1f, 0.2f, 0.4f, 0.8f}) {
        auto b = a;
        for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] += s * noise.data()[i];
        const auto q = quality(a, b);
        EXPECT_LT(q.psnr_db, prev_psnr);
        EXPECT_LT(q.ssim, prev_ssim);
        prev_psnr = q.psnr_db;
        prev_ssim = q.ssim;
    }
}

TEST(Metrics, ShapeMismatch) {
    PlanarImage a(4, 4, 1, ColorSpace::Linear), b(4, 5, 1, ColorSpace::Linear);
    EXPECT_THROW(psnr(a, b), Error);
    EXPECT_THROW(ssim(a, b), Error);
}
