// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "eigengs/eigenbasis.hpp"
#include "eigengs/gaussian.hpp"
#include "eigengs/render.hpp"
#include "eigengs/report.hpp"

namespace eigengs {

struct LearningRates {
    double pos = 2e-3;
    double fac = 2e-3;
    double weight = 1e-2;
};

struct TrainConfig {
    int n_gaussians = 1000;
    bool freq_learning = true;
    double low_fraction = 0.10;
    int k_low = 0; // 0 selects ceil(k / 10)
    LearningRates lr;
    int phase1_iters = 1000;
    int phase2_iters = 1000;
    std::uint64_t seed = 0;
    int eval_every = 50;
    /// Initial isotropic scale as a fraction of min(width, height).
    double init_scale = 0.02;
    double init_weight_std = 0.01;
    RenderOptions render;

    /// Throws ConfigError for invalid settings given a basis of k components.
    void validate(int k) const;
    int resolved_k_low(int k) const;
    int resolved_low_count() const;
};

/// Fits one shared Gaussian set to the basis eigenimages. With frequency
/// learning, phase 1 trains the low partition on the leading k_low
/// components, then phase 2 freezes it and trains the remaining Gaussians
/// on the rest. Report rows use the full-model MSE over all components.
struct EigenFitResult {
    EigenGaussianModel model;
    FitReport report;
};
EigenFitResult fit_eigenbasis(const Eigenbasis& basis, const TrainConfig& cfg);

struct FinetuneConfig {
    int iters = 1000;
    LearningRates lr;
    int eval_every = 50;
    RenderOptions render;
};

/// Called with (iteration, current set) at every iteration 0..iters.
using FinetuneObserver = std::function<void(int, const ImageGaussianSet&)>;

struct FinetuneResult {
    ImageGaussianSet set;
    FitReport report;
};

/// Adam on geometry and weights against MSE to target. Report rows at
/// iteration 0, every eval_every iterations, and the final iteration; PSNR
/// and SSIM are measured in display space.
FinetuneResult finetune_image(const ImageGaussianSet& set, const PlanarImage& target, const FinetuneConfig& cfg,
                              const FinetuneObserver& observer = {});

} // namespace eigengs
