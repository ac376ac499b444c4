// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "eigengs/adam.hpp"
#include "eigengs/error.hpp"
#include "eigengs/grad.hpp"
#include "eigengs/metrics.hpp"

namespace eigengs {

int TrainConfig::resolved_k_low(int k) const {
    if (!freq_learning) return 0;
    return k_low > 0 ? k_low : (k + 9) / 10;
}

int TrainConfig::resolved_low_count() const {
    if (!freq_learning) return 0;
    return static_cast<int>(std::lround(low_fraction * n_gaussians));
}

void TrainConfig::validate(int k) const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); };
    if (n_gaussians < 1) fail("n_gaussians must be positive");
    if (!(lr.pos > 0 && lr.fac > 0 && lr.weight > 0)) fail("learning rates must be positive");
    if (phase1_iters < 0 || phase2_iters < 0) fail("iteration counts must be non-negative");
    if (eval_every < 1) fail("eval_every must be positive");
    if (!(init_scale > 0)) fail("init_scale must be positive");
    if (!(init_weight_std >= 0)) fail("init_weight_std must be non-negative");
    if (k < 1) fail("basis has no components");
    if (freq_learning) {
        if (!(low_fraction > 0 && low_fraction < 1)) fail("low_fraction must lie in (0, 1)");
        if (k < 2) fail("frequency learning needs at least 2 components");
        const int kl = resolved_k_low(k);
        if (kl < 1 || kl >= k) fail("k_low must lie in [1, k)");
        const int nl = resolved_low_count();
        if (nl < 1 || nl >= n_gaussians) fail("low partition must hold between 1 and N-1 Gaussians");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

class EigenTrainer {
public:
    EigenTrainer(const Eigenbasis& basis, const TrainConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
        for (int j = 0; j < basis.k(); ++j) targets_.push_back(basis.component_image(j));
        EigenGaussianModel& m = model_;
        m.shape = {basis.shape().width, basis.shape().height, basis.shape().channels, basis.k()};
        m.low_count = cfg.resolved_low_count();
        m.k_low = cfg.resolved_k_low(basis.k());
        m.geometry.resize(cfg.n_gaussians);
        m.weights.assign(m.count() * m.features(), 0.0f);
        // Placeholder geometry for Gaussians not yet initialized; their
        // weights stay zero so they render nothing.
        const auto fac = isotropic_factor(cfg.init_scale * std::min(m.shape.width, m.shape.height));
        for (std::size_t n = 0; n < m.count(); ++n) m.geometry.set(n, Gaussian2D{{0.0f, 0.0f}, fac});
    }

    EigenFitResult run() {
        start_ = Clock::now();
        if (model_.frequency_split()) {
            initialize(ComponentSubset::LowOnly);
            optimize(ComponentSubset::LowOnly, Freeze::FreezeHigh, cfg_.phase1_iters);
            initialize(ComponentSubset::HighOnly);
            optimize(ComponentSubset::HighOnly, Freeze::FreezeLow, cfg_.phase2_iters);
        } else {
            initialize(ComponentSubset::All);
            optimize(ComponentSubset::All, Freeze::None, cfg_.phase1_iters + cfg_.phase2_iters);
        }
        if (report_.rows.empty() || report_.rows.back().iteration != iteration_) record();
        return {std::move(model_), std::move(report_)};
    }

private:
    void initialize(ComponentSubset subset) {
        const auto [g0, g1] = model_.gaussian_range(subset);
        const auto [j0, j1] = model_.component_range(subset);
        const int C = model_.shape.channels;
        const auto fac = isotropic_factor(cfg_.init_scale * std::min(model_.shape.width, model_.shape.height));
        std::uniform_real_distribution<float> uniform(0.05f, 0.95f);
        std::normal_distribution<float> normal(0.0f, static_cast<float>(cfg_.init_weight_std));
        for (std::size_t n = g0; n < g1; ++n) {
            const float u = uniform(rng_);
            const float v = uniform(rng_);
            model_.geometry.set(n, Gaussian2D{{logit(u), logit(v)}, fac});
            for (int j = j0; j < j1; ++j) {
                for (int c = 0; c < C; ++c) model_.weight(n, j, c) = cfg_.init_weight_std > 0 ? normal(rng_) : 0.0f;
            }
        }
    }

    void optimize(ComponentSubset subset, Freeze freeze, int iters) {
        const auto [g0, g1] = model_.gaussian_range(subset);
        const std::size_t count = g1 - g0;
        const std::size_t F = model_.features();
        AdamState pos_state(count * 2), fac_state(count * 3), weight_state(count * F);
        auto& geo = model_.geometry;

        if (report_.rows.empty()) record();
        for (int it = 0; it < iters; ++it) {
            const auto lg = backward_components(model_, targets_, freeze, subset, cfg_.render);
            report_.loss_trace.push_back(lg.loss);
            ++pos_state.t;
            ++fac_state.t;
            ++weight_state.t;
            adam_update(std::span(geo.pos_raw).subspan(2 * g0, 2 * count),
                        std::span(lg.grads.d_pos_raw).subspan(2 * g0, 2 * count), pos_state, cfg_.lr.pos);
            adam_update(std::span(geo.fac_raw).subspan(3 * g0, 3 * count),
                        std::span(lg.grads.d_fac_raw).subspan(3 * g0, 3 * count), fac_state, cfg_.lr.fac);
            adam_update(std::span(model_.weights).subspan(F * g0, F * count),
                        std::span(lg.grads.d_weights).subspan(F * g0, F * count), weight_state, cfg_.lr.weight);
            ++iteration_;
            if (iteration_ % cfg_.eval_every == 0) record();
        }
    }

    void record() {
        const double train_seconds = seconds_since(start_) - eval_seconds_;
        const auto eval_start = Clock::now();
        const auto renders = render_components(model_, ComponentSubset::All, cfg_.render);
        double sq = 0.0;
        double ssim_sum = 0.0;
        std::size_t samples = 0;
        for (int j = 0; j < model_.shape.k; ++j) {
            auto r = renders[j].data();
            auto t = targets_[j].data();
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double d = static_cast<double>(r[i]) - t[i];
                sq += d * d;
            }
            samples += r.size();
            ssim_sum += ssim_raw(renders[j], targets_[j]);
        }
        const double loss = sq / static_cast<double>(samples);
        report_.rows.push_back({iteration_, loss, psnr_from_mse(loss), ssim_sum / model_.shape.k, train_seconds});
        eval_seconds_ += seconds_since(eval_start);
    }

    TrainConfig cfg_;
    std::mt19937_64 rng_;
    std::vector<PlanarImage> targets_;
    EigenGaussianModel model_;
    FitReport report_;
    long iteration_ = 0;
    Clock::time_point start_;
    double eval_seconds_ = 0.0;
};

} // namespace

EigenFitResult fit_eigenbasis(const Eigenbasis& basis, const TrainConfig& cfg) {
    cfg.validate(basis.k());
    return EigenTrainer(basis, cfg).run();
}

FinetuneResult finetune_image(const ImageGaussianSet& set, const PlanarImage& target, const FinetuneConfig& cfg,
                              const FinetuneObserver& observer) {
    set.validate();
    if (!(target.shape() == set.mean_ref.shape())) {
        throw Error(ErrorKind::ShapeError, "target shape does not match the image set");
    }
    if (cfg.iters < 0 || cfg.eval_every < 1) {
        throw Error(ErrorKind::ConfigError, "iters must be >= 0 and eval_every >= 1");
    }

    FinetuneResult result{set, {}};
    ImageGaussianSet& cur = result.set;
    const std::size_t N = cur.count();
    const std::size_t C = static_cast<std::size_t>(cur.channels());
    AdamState pos_state(N * 2), fac_state(N * 3), weight_state(N * C);

    double train_seconds = 0.0;
    auto record = [&](int iteration) {
        const PlanarImage render = render_image(cur, cfg.render);
        const QualityScore q = quality(render, target);
        result.report.rows.push_back({iteration, mse(render, target), q.psnr_db, q.ssim, train_seconds});
    };

    record(0);
    if (observer) observer(0, cur);
    for (int it = 1; it <= cfg.iters; ++it) {
        const auto t0 = Clock::now();
        const auto lg = backward_image(cur, target, cfg.render);
        result.report.loss_trace.push_back(lg.loss);
        adam_step(cur.geometry.pos_raw, lg.grads.d_pos_raw, pos_state, cfg.lr.pos);
        adam_step(cur.geometry.fac_raw, lg.grads.d_fac_raw, fac_state, cfg.lr.fac);
        adam_step(cur.weights, lg.grads.d_weights, weight_state, cfg.lr.weight);
        train_seconds += seconds_since(t0);
        if (it % cfg.eval_every == 0 || it == cfg.iters) record(it);
        if (observer) observer(it, cur);
    }
    return result;
}

} // namespace eigengs
