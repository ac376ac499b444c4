// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "eigengs/adam.hpp"
#include "eigengs/error.hpp"
#include "eigengs/metrics.hpp"
#include "eigengs/train.hpp"
#include "eigengs/transform.hpp"
#include "test_util.hpp"

using namespace eigengs;
using eigengs::testing::toy_basis;

namespace {

TrainConfig toy_config() {
    TrainConfig cfg;
    cfg.n_gaussians = 64;
    cfg.phase1_iters = 150;
    cfg.phase2_iters = 150;
    cfg.seed = 3;
    cfg.eval_every = 25;
    cfg.init_scale = 0.1;
    return cfg;
}

} // namespace

TEST(Adam, ZeroGradientLeavesParamsAlone) {
    std::vector<float> p = {1.0f, -2.0f};
    const std::vector<float> g = {0.0f, 0.0f};
    AdamState s(2);
    for (int i = 0; i < 5; ++i) adam_step(p, g, s, 0.1);
    EXPECT_EQ(p[0], 1.0f);
    EXPECT_EQ(p[1], -2.0f);
}

TEST(Adam, FirstStepMovesByLearningRate) {
    std::vector<float> p = {0.5f, 0.5f};
    const std::vector<float> g = {3.0f, -1e-3f};
    AdamState s(2);
    adam_step(p, g, s, 0.01);
    EXPECT_NEAR(p[0], 0.49, 1e-6);
    EXPECT_NEAR(p[1], 0.51, 1e-5);
}

TEST(Adam, MatchesScalarReference) {
    const double grads[5] = {0.3, -0.1, 0.7, 0.0, -0.4};
    double x = 1.0, m = 0, v = 0;
    std::vector<float> p = {1.0f};
    AdamState s(1);
    for (int t = 1; t <= 5; ++t) {
        m = 0.9 * m + 0.1 * grads[t - 1];
        v = 0.999 * v + 0.001 * grads[t - 1] * grads[t - 1];
        x -= 0.05 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
        const std::vector<float> g = {static_cast<float>(grads[t - 1])};
        adam_step(p, g, s, 0.05);
        EXPECT_NEAR(p[0], x, 1e-7);
    }
}

TEST(Adam, RejectsUnadvancedClockAndSizeMismatch) {
    std::vector<float> p = {1.0f};
    const std::vector<float> g = {1.0f};
    AdamState s(1);
    EXPECT_THROW(adam_update(p, g, s, 0.1), Error);
    AdamState wrong(2);
    EXPECT_THROW(adam_step(p, g, wrong, 0.1), Error);
}

TEST(TrainConfig, ResolvedPartitions) {
    TrainConfig cfg;
    EXPECT_EQ(cfg.resolved_k_low(10), 1);
    EXPECT_EQ(cfg.resolved_k_low(30), 3);
    EXPECT_EQ(cfg.resolved_k_low(11), 2);
    cfg.n_gaussians = 20000;
    EXPECT_EQ(cfg.resolved_low_count(), 2000);
    cfg.freq_learning = false;
    EXPECT_EQ(cfg.resolved_low_count(), 0);
    EXPECT_EQ(cfg.resolved_k_low(10), 0);
}

TEST(TrainConfig, Validation) {
    TrainConfig cfg;
    EXPECT_NO_THROW(cfg.validate(10));
    EXPECT_THROW(cfg.validate(1), Error);
    auto bad = cfg;
    bad.k_low = 10;
    EXPECT_THROW(bad.validate(10), Error);
    bad = cfg;
    bad.low_fraction = 1.0;
    EXPECT_THROW(bad.validate(10), Error);
    bad = cfg;
    bad.n_gaussians = 0;
    EXPECT_THROW(bad.validate(10), Error);
    bad = cfg;
    bad.lr.pos = 0;
    EXPECT_THROW(bad.validate(10), Error);
    bad = cfg;
    bad.freq_learning = false;
    EXPECT_NO_THROW(bad.validate(1));
}

class ToyFit : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        basis_ = new Eigenbasis(toy_basis(16, 4));
        result_ = new EigenFitResult(fit_eigenbasis(*basis_, toy_config()));
    }
    static void TearDownTestSuite() {
        delete result_;
        delete basis_;
    }
    static Eigenbasis* basis_;
    static EigenFitResult* result_;
};
Eigenbasis* ToyFit::basis_ = nullptr;
EigenFitResult* ToyFit::result_ = nullptr;

TEST_F(ToyFit, LossDrops) {
    const auto& rows = result_->report.rows;
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows.front().iteration, 0);
    EXPECT_EQ(rows.back().iteration, 300);
    EXPECT_LT(rows.back().loss, 0.25 * rows.front().loss);
    EXPECT_EQ(result_->report.loss_trace.size(), 300u);
}

TEST_F(ToyFit, PartitionLayout) {
    const auto& m = result_->model;
    EXPECT_EQ(m.count(), 64u);
    EXPECT_EQ(m.low_count, 6);
    EXPECT_EQ(m.k_low, 1);
    EXPECT_NO_THROW(m.validate());
    for (std::size_t n = 0; n < m.count(); ++n) {
        for (int j = 0; j < m.shape.k; ++j) {
            for (int c = 0; c < m.shape.channels; ++c) {
                if (m.is_cross_pair(n, j)) {
                    EXPECT_EQ(m.weight(n, j, c), 0.0f);
                }
            }
        }
    }
}

TEST_F(ToyFit, PhaseTwoLeavesLowPartitionUntouched) {
    auto cfg = toy_config();
    cfg.phase2_iters = 0;
    const auto phase1 = fit_eigenbasis(*basis_, cfg);
    const auto& a = phase1.model;
    const auto& b = result_->model;
    const std::size_t low = static_cast<std::size_t>(a.low_count);
    const std::size_t F = a.features();
    EXPECT_TRUE(std::equal(a.geometry.pos_raw.begin(), a.geometry.pos_raw.begin() + 2 * low, b.geometry.pos_raw.begin()));
    EXPECT_TRUE(std::equal(a.geometry.fac_raw.begin(), a.geometry.fac_raw.begin() + 3 * low, b.geometry.fac_raw.begin()));
    EXPECT_TRUE(std::equal(a.weights.begin(), a.weights.begin() + F * low, b.weights.begin()));
}

TEST_F(ToyFit, Reproducible) {
    const auto again = fit_eigenbasis(*basis_, toy_config());
    EXPECT_EQ(again.model.geometry, result_->model.geometry);
    EXPECT_EQ(again.model.weights, result_->model.weights);
    EXPECT_EQ(again.report.loss_trace, result_->report.loss_trace);
}

TEST_F(ToyFit, WindowedLossNonIncreasingWithinPhases) {
    const auto& trace = result_->report.loss_trace;
    for (std::size_t phase_start : {std::size_t{0}, std::size_t{150}}) {
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t w = phase_start; w + 50 <= phase_start + 150; w += 50) {
            double mean = 0;
            for (std::size_t i = w; i < w + 50; ++i) mean += trace[i];
            mean /= 50;
            EXPECT_LE(mean, prev) << w;
            prev = mean;
        }
    }
}

TEST(Train, WithoutFrequencyLearningIsOnePhase) {
    const auto basis = toy_basis(16, 4);
    auto cfg = toy_config();
    cfg.freq_learning = false;
    cfg.phase1_iters = 40;
    cfg.phase2_iters = 20;
    const auto r = fit_eigenbasis(basis, cfg);
    EXPECT_EQ(r.model.low_count, 0);
    EXPECT_EQ(r.report.loss_trace.size(), 60u);
    EXPECT_EQ(r.report.rows.back().iteration, 60);
}

TEST(Finetune, ZeroItersGivesOneRow) {
    const auto basis = toy_basis(16, 4);
    auto cfg = toy_config();
    cfg.phase1_iters = cfg.phase2_iters = 20;
    const auto fit = fit_eigenbasis(basis, cfg);
    const auto target = eigengs::testing::toy_corpus(16, 1, 77).images[0];
    FinetuneConfig fc;
    fc.iters = 0;
    const auto set = init_for_image(fit.model, basis, target);
    const auto r = finetune_image(set, target, fc);
    ASSERT_EQ(r.report.rows.size(), 1u);
    EXPECT_EQ(r.report.rows[0].iteration, 0);
    EXPECT_NEAR(r.report.rows[0].psnr_db, psnr(render_image(set), target), 1e-9);
}

TEST(Finetune, TargetEqualToRenderIsAFixedPoint) {
    const auto basis = toy_basis(16, 4);
    auto cfg = toy_config();
    cfg.phase1_iters = cfg.phase2_iters = 20;
    const auto fit = fit_eigenbasis(basis, cfg);
    const auto set = init_for_image(fit.model, basis, basis.mean);
    const auto target = render_image(set);
    FinetuneConfig fc;
    fc.iters = 10;
    const auto r = finetune_image(set, target, fc);
    EXPECT_EQ(r.set.geometry, set.geometry);
    EXPECT_EQ(r.set.weights, set.weights);
}

TEST(Finetune, ImprovesQualityAndCallsObserver) {
    const auto basis = toy_basis(16, 4);
    auto cfg = toy_config();
    cfg.phase1_iters = cfg.phase2_iters = 60;
    const auto fit = fit_eigenbasis(basis, cfg);
    const auto target = eigengs::testing::toy_corpus(16, 1, 78).images[0];
    FinetuneConfig fc;
    fc.iters = 120;
    fc.eval_every = 50;
    int calls = 0;
    const auto r = finetune_image(init_for_image(fit.model, basis, target), target, fc,
                                  [&](int it, const ImageGaussianSet&) { EXPECT_EQ(it, calls++); });
    EXPECT_EQ(calls, 121);
    std::vector<int> its;
    for (const auto& row : r.report.rows) its.push_back(row.iteration);
    EXPECT_EQ(its, (std::vector<int>{0, 50, 100, 120}));
    EXPECT_GT(r.report.rows.back().psnr_db, r.report.rows.front().psnr_db + 1.0);
    EXPECT_GE(r.report.rows.back().seconds, 0.0);
}

TEST(Finetune, RejectsMismatchedTarget) {
    ImageGaussianSet set;
    set.mean_ref = PlanarImage(8, 8, 3, ColorSpace::YCbCr);
    EXPECT_THROW(finetune_image(set, PlanarImage(8, 9, 3, ColorSpace::YCbCr), {}), Error);
}
